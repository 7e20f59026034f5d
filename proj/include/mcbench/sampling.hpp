#pragma once

#include "mcbench/mesh.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcbench {

/// A point sampled uniformly on a mesh surface.
struct SurfaceSample {
    Vec3 position;
    int triangle = -1;
    Vec3 barycentric;           // (w0, w1, w2), non-negative, summing to 1
    std::optional<Vec3> color;  // interpolated texture color, absent if untextured
};

/// Color of the texture at barycentric coordinates inside a triangle.
/// Requires a textured mesh.
Vec3 barycentric_color(const TexturedMesh& mesh, int triangle, const Vec3& bary);

/// Draws `count` points uniformly over the surface: triangles are chosen
/// with probability proportional to area (degenerate triangles are never
/// chosen) and positions inside a triangle use the square-root barycentric
/// map (1-sqrt(r1), sqrt(r1)(1-r2), sqrt(r1) r2). Each sample draws from its
/// own stream keyed by (seed, ordinal), so results are bit-identical for a
/// given (mesh, count, seed) regardless of evaluation order.
/// Throws if the mesh has zero total area and count > 0.
std::vector<SurfaceSample> sample_surface(const TexturedMesh& mesh, int count,
                                          std::uint64_t seed);

}  // namespace mcbench
