#pragma once

#include "mcbench/mesh.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcbench {

/// Parameters for synthetic partial-scan generation: `holes` regions are cut,
/// each removing round(fraction * original vertex count) vertices.
struct HoleSpec {
    int holes = 40;
    double fraction = 0.02;
    std::uint64_t seed = 0;
    std::optional<RegionMask> mask;  // restricts centers and removed vertices
};

/// Per-hole record (in the coordinates of the input mesh) for auditing.
struct HoleTrace {
    int center = -1;
    std::vector<int> removed;
};

/// Removes the k eligible vertices nearest to `center` (center included)
/// and every incident triangle.
TexturedMesh cut_hole(const TexturedMesh& mesh, int center, int k,
                      const RegionMask* mask = nullptr);

/// Cuts spec.holes holes; each center is drawn uniformly from the remaining
/// eligible vertices (stream keyed by (seed, hole ordinal)) and each hole
/// removes exactly min(k, remaining eligible) vertices with k fixed from the
/// original vertex count. Deterministic for a given (mesh, spec). An
/// exhausted eligible set short-circuits. `trace`, when given, receives one
/// record per hole with indices into the input mesh.
TexturedMesh generate_partial(const TexturedMesh& mesh, const HoleSpec& spec,
                              std::vector<HoleTrace>* trace = nullptr);

/// Shape-noise placement: everywhere, or only inside randomly placed balls.
struct ShapeNoiseMode {
    enum class Kind { Global, Local };
    Kind kind = Kind::Global;
    double region_radius = 0.0;
    int region_count = 0;

    static ShapeNoiseMode global() { return {}; }
    static ShapeNoiseMode local(double radius, int count) {
        return {Kind::Local, radius, count};
    }
};

/// Displaces vertices by i.i.d. zero-mean Gaussian noise of the given
/// per-coordinate standard deviation. In local mode only vertices within the
/// chosen regions move; all others are bit-identical. Connectivity and UVs
/// are unchanged. Per-vertex streams keyed by (seed, vertex index).
TexturedMesh add_shape_noise(const TexturedMesh& mesh, double sigma,
                             const ShapeNoiseMode& mode, std::uint64_t seed);

/// Adds i.i.d. Gaussian noise per channel, clamped to [0, 1].
TextureImage add_texture_noise(const TextureImage& texture, double sigma,
                               std::uint64_t seed);

/// Baseline hole filling: each boundary loop gains a centroid vertex
/// (position and UV averaged over the loop) and a triangle fan. Existing
/// vertices never move; the result has no boundary edges on filled loops.
TexturedMesh fill_holes_baseline(const TexturedMesh& mesh);

}  // namespace mcbench
