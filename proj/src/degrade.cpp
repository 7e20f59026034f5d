#include "mcbench/degrade.hpp"

#include "mcbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace mcbench {

namespace {

// Eligible vertices under an optional mask; identity when mask is null.
bool eligible(const RegionMask* mask, int vertex) {
    return mask == nullptr || (*mask)[vertex];
}

}  // namespace

TexturedMesh cut_hole(const TexturedMesh& mesh, int center, int k,
                      const RegionMask* mask) {
    const std::vector<int> doomed = vertex_knn(mesh, center, k, mask);
    return remove_vertices(mesh, doomed);
}

TexturedMesh generate_partial(const TexturedMesh& mesh, const HoleSpec& spec,
                              std::vector<HoleTrace>* trace) {
    validate_mesh(mesh);
    if (spec.holes < 0) throw std::invalid_argument("hole count must be >= 0");
    if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0))
        throw std::invalid_argument("hole fraction must lie in [0, 1]");
    if (spec.mask && int(spec.mask->size()) != mesh.vertex_count())
        throw std::invalid_argument("mask size does not match vertex count");
    if (trace) trace->clear();

    const int n = mesh.vertex_count();
    const int k = int(std::lround(spec.fraction * n));

    // Vertices keep their input-mesh indices until one final removal pass, so
    // every kNN query sees original positions and original tie-break order.
    std::vector<bool> alive(n, true);
    std::vector<int> eligible_alive;  // sorted, rebuilt per hole
    eligible_alive.reserve(n);
    std::vector<int> all_doomed;

    for (int hole = 0; hole < spec.holes; ++hole) {
        eligible_alive.clear();
        for (int v = 0; v < n; ++v)
            if (alive[v] && eligible(spec.mask ? &*spec.mask : nullptr, v))
                eligible_alive.push_back(v);
        if (eligible_alive.empty()) break;

        RandomStream stream = RandomStream::keyed(spec.seed, std::uint64_t(hole));
        const int center =
            eligible_alive[stream.next_index(eligible_alive.size())];

        // Nearest eligible living vertices to the center, center first.
        RegionMask live_eligible(n, false);
        for (int v : eligible_alive) live_eligible[v] = true;
        const std::vector<int> removed =
            vertex_knn(mesh, center, std::min<int>(k, int(eligible_alive.size())),
                       &live_eligible);

        for (int v : removed) alive[v] = false;
        all_doomed.insert(all_doomed.end(), removed.begin(), removed.end());
        if (trace) trace->push_back({center, removed});
    }

    std::sort(all_doomed.begin(), all_doomed.end());
    return remove_vertices(mesh, all_doomed);
}

TexturedMesh add_shape_noise(const TexturedMesh& mesh, double sigma,
                             const ShapeNoiseMode& mode, std::uint64_t seed) {
    validate_mesh(mesh);
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");

    std::vector<bool> affected;
    if (mode.kind == ShapeNoiseMode::Kind::Local) {
        if (!(mode.region_radius > 0.0) || mode.region_count <= 0)
            throw std::invalid_argument("local noise needs a radius and region count");
        affected.assign(mesh.vertices.size(), false);
        // Region centers are existing vertices; one stream ordinal per region,
        // reserved after the per-vertex ordinals so streams never collide.
        const std::uint64_t region_base = std::uint64_t(mesh.vertices.size());
        const double r_sq = mode.region_radius * mode.region_radius;
        for (int r = 0; r < mode.region_count; ++r) {
            RandomStream stream = RandomStream::keyed(seed, region_base + r);
            const Vec3 center =
                mesh.vertices[stream.next_index(mesh.vertices.size())];
            for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
                if ((mesh.vertices[v] - center).squaredNorm() <= r_sq)
                    affected[v] = true;
        }
    }

    TexturedMesh out = mesh;
    for (std::size_t v = 0; v < out.vertices.size(); ++v) {
        if (!affected.empty() && !affected[v]) continue;
        RandomStream stream = RandomStream::keyed(seed, std::uint64_t(v));
        out.vertices[v] += sigma * Vec3(stream.next_gaussian(), stream.next_gaussian(),
                                        stream.next_gaussian());
    }
    return out;
}

TextureImage add_texture_noise(const TextureImage& texture, double sigma,
                               std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
    TextureImage out = texture;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        RandomStream stream = RandomStream::keyed(seed, std::uint64_t(i));
        const double noisy = double(out.data[i]) + sigma * stream.next_gaussian();
        out.data[i] = float(std::clamp(noisy, 0.0, 1.0));
    }
    return out;
}

TexturedMesh fill_holes_baseline(const TexturedMesh& mesh) {
    const std::vector<std::vector<int>> loops = boundary_loops(mesh);
    if (loops.empty()) return mesh;

    TexturedMesh out = mesh;

    // Corner UVs belong to triangles, not vertices, so recover one UV per
    // boundary vertex from any incident corner (boundary corners agree on
    // seam-free meshes; any disagreement just shifts the centroid sample).
    std::unordered_map<int, Vec2> vertex_uv;
    if (mesh.has_uvs()) {
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
            for (int c = 0; c < 3; ++c)
                vertex_uv.emplace(mesh.triangles[t][c], mesh.corner_uvs[t][c]);
    }

    for (const std::vector<int>& loop : loops) {
        Vec3 centroid = Vec3::Zero();
        Vec2 centroid_uv = Vec2::Zero();
        for (int v : loop) {
            centroid += mesh.vertices[v];
            if (mesh.has_uvs()) centroid_uv += vertex_uv.at(v);
        }
        centroid /= double(loop.size());
        if (mesh.has_uvs()) centroid_uv /= double(loop.size());

        const int center = int(out.vertices.size());
        out.vertices.push_back(centroid);
        // The loop walks boundary edges a->b with the surface on the left;
        // (b, a, centroid) keeps the fan's orientation consistent with it.
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const int a = loop[i];
            const int b = loop[(i + 1) % loop.size()];
            out.triangles.push_back({b, a, center});
            if (mesh.has_uvs())
                out.corner_uvs.push_back({vertex_uv.at(b), vertex_uv.at(a), centroid_uv});
        }
    }
    validate_mesh(out);
    return out;
}

}  // namespace mcbench
