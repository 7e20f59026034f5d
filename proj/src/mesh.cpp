#include "mcbench/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace mcbench {

namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

}  // namespace

void validate_mesh(const TexturedMesh& mesh) {
    const int nv = mesh.vertex_count();
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int c = 0; c < 3; ++c) {
            if (tri[c] < 0 || tri[c] >= nv)
                throw std::runtime_error("triangle " + std::to_string(t) +
                                         " references vertex " + std::to_string(tri[c]) +
                                         " of " + std::to_string(nv));
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw std::runtime_error("triangle " + std::to_string(t) +
                                     " repeats a vertex index");
    }
    if (mesh.has_uvs() && mesh.corner_uvs.size() != mesh.triangles.size())
        throw std::runtime_error("corner UV count does not match triangle count");
    if (mesh.has_texture()) {
        if (!mesh.has_uvs() && !mesh.triangles.empty())
            throw std::runtime_error("textured mesh is missing corner UVs");
        const TextureImage& tex = *mesh.texture;
        if (tex.width < 1 || tex.height < 1)
            throw std::runtime_error("texture has empty extent");
        if (tex.data.size() != std::size_t(3) * tex.width * tex.height)
            throw std::runtime_error("texture pixel buffer size mismatch");
        for (float v : tex.data)
            if (!(v >= 0.0f && v <= 1.0f))
                throw std::runtime_error("texture channel outside [0, 1]");
    }
}

double triangle_area(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
    return 0.5 * (p1 - p0).cross(p2 - p0).norm();
}

double mesh_surface_area(const TexturedMesh& mesh) {
    double area = 0.0;
    for (const auto& tri : mesh.triangles)
        area += triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                              mesh.vertices[tri[2]]);
    return area;
}

std::vector<int> vertex_knn(const TexturedMesh& mesh, int center, int k,
                            const RegionMask* mask) {
    const int nv = mesh.vertex_count();
    if (center < 0 || center >= nv)
        throw std::out_of_range("vertex_knn: center index " + std::to_string(center) +
                                " of " + std::to_string(nv));
    if (mask) {
        if (static_cast<int>(mask->size()) != nv)
            throw std::invalid_argument("vertex_knn: mask length does not match mesh");
        if (!(*mask)[center])
            throw std::invalid_argument("vertex_knn: center is not eligible");
    }
    if (k <= 0) return {};

    const Vec3 c = mesh.vertices[center];
    std::vector<std::pair<double, int>> candidates;
    candidates.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        if (mask && !(*mask)[i]) continue;
        candidates.emplace_back((mesh.vertices[i] - c).squaredNorm(), i);
    }
    const std::size_t take = std::min<std::size_t>(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end());
    std::vector<int> result(take);
    for (std::size_t i = 0; i < take; ++i) result[i] = candidates[i].second;
    return result;
}

TexturedMesh remove_vertices(const TexturedMesh& mesh, const std::vector<int>& doomed) {
    const int nv = mesh.vertex_count();
    std::vector<bool> dead(nv, false);
    for (int i : doomed) {
        if (i < 0 || i >= nv)
            throw std::out_of_range("remove_vertices: index " + std::to_string(i) +
                                    " of " + std::to_string(nv));
        dead[i] = true;
    }

    TexturedMesh out;
    out.texture = mesh.texture;
    std::vector<int> remap(nv, -1);
    out.vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        if (dead[i]) continue;
        remap[i] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[i]);
    }
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        if (dead[tri[0]] || dead[tri[1]] || dead[tri[2]]) continue;
        out.triangles.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
        if (mesh.has_uvs()) out.corner_uvs.push_back(mesh.corner_uvs[t]);
    }
    return out;
}

Vec3 texture_lookup(const TextureImage& texture, const Vec2& uv) {
    // Continuous texel coordinates; texel i has its center at (i + 0.5) / n.
    double x = uv.x() * texture.width - 0.5;
    double y = uv.y() * texture.height - 0.5;
    x = std::clamp(x, 0.0, double(texture.width - 1));
    y = std::clamp(y, 0.0, double(texture.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, texture.width - 1);
    const int y1 = std::min(y0 + 1, texture.height - 1);
    const double tx = x - x0;
    const double ty = y - y0;
    return (1.0 - ty) * ((1.0 - tx) * texture.texel_rgb(x0, y0) +
                         tx * texture.texel_rgb(x1, y0)) +
           ty * ((1.0 - tx) * texture.texel_rgb(x0, y1) +
                 tx * texture.texel_rgb(x1, y1));
}

std::vector<std::vector<int>> boundary_loops(const TexturedMesh& mesh) {
    std::unordered_map<std::uint64_t, int> incidence;
    incidence.reserve(mesh.triangles.size() * 3);
    for (const auto& tri : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            int count = ++incidence[edge_key(tri[c], tri[(c + 1) % 3])];
            if (count > 2)
                throw std::runtime_error("boundary_loops: edge " +
                                         std::to_string(tri[c]) + "-" +
                                         std::to_string(tri[(c + 1) % 3]) +
                                         " is shared by more than two triangles");
        }
    }

    // Directed boundary edges, keyed by start vertex. Ordered containers keep
    // traversal deterministic; targets are consumed lowest-first so bowtie
    // vertices still decompose into closed cycles.
    std::map<int, std::vector<int>> outgoing;
    for (const auto& tri : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            const int a = tri[c], b = tri[(c + 1) % 3];
            if (incidence.at(edge_key(a, b)) == 1) outgoing[a].push_back(b);
        }
    }
    for (auto& [v, targets] : outgoing) std::sort(targets.begin(), targets.end());

    std::vector<std::vector<int>> loops;
    while (!outgoing.empty()) {
        const int start = outgoing.begin()->first;
        std::vector<int> loop;
        int current = start;
        do {
            auto it = outgoing.find(current);
            if (it == outgoing.end())
                throw std::runtime_error(
                    "boundary_loops: open boundary chain at vertex " +
                    std::to_string(current) + " (non-manifold or inconsistent winding)");
            loop.push_back(current);
            const int next = it->second.front();
            it->second.erase(it->second.begin());
            if (it->second.empty()) outgoing.erase(it);
            current = next;
        } while (current != start);
        loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace mcbench
