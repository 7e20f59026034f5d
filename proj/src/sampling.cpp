#include "mcbench/sampling.hpp"

#include "mcbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcbench {

Vec3 barycentric_color(const TexturedMesh& mesh, int triangle, const Vec3& bary) {
    if (!mesh.has_texture() || !mesh.has_uvs())
        throw std::runtime_error("barycentric_color: mesh has no texture");
    if (triangle < 0 || triangle >= mesh.triangle_count())
        throw std::out_of_range("barycentric_color: triangle index out of range");
    const auto& uv = mesh.corner_uvs[triangle];
    const Vec2 p = bary[0] * uv[0] + bary[1] * uv[1] + bary[2] * uv[2];
    return texture_lookup(*mesh.texture, p);
}

std::vector<SurfaceSample> sample_surface(const TexturedMesh& mesh, int count,
                                          std::uint64_t seed) {
    if (count < 0) throw std::invalid_argument("sample count must be non-negative");
    if (count == 0) return {};
    validate_mesh(mesh);

    // Cumulative area table; zero-area triangles occupy an empty interval and
    // are never selected.
    std::vector<double> cumulative(mesh.triangles.size());
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        total += triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                               mesh.vertices[tri[2]]);
        cumulative[t] = total;
    }
    if (!(total > 0.0))
        throw std::runtime_error("cannot sample a mesh with zero surface area");

    std::vector<SurfaceSample> samples;
    samples.reserve(count);
    for (int i = 0; i < count; ++i) {
        // Each sample gets its own stream so results are independent of
        // evaluation order.
        RandomStream stream = RandomStream::keyed(seed, std::uint64_t(i));
        const double pick = stream.next_unit() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        const int tri =
            int(std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1));

        const double r1 = stream.next_unit();
        const double r2 = stream.next_unit();
        const double s = std::sqrt(r1);
        const Vec3 bary(1.0 - s, s * (1.0 - r2), s * r2);

        const auto& tv = mesh.triangles[tri];
        SurfaceSample sample;
        sample.triangle = tri;
        sample.barycentric = bary;
        sample.position = bary[0] * mesh.vertices[tv[0]] +
                          bary[1] * mesh.vertices[tv[1]] +
                          bary[2] * mesh.vertices[tv[2]];
        if (mesh.has_texture()) sample.color = barycentric_color(mesh, tri, bary);
        samples.push_back(sample);
    }
    return samples;
}

}  // namespace mcbench
