#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace mcbench {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// RGB texture atlas. Channels are floats in [0, 1].
/// Scanlines are stored bottom-up: row 0 is the bottom of the image, so a
/// texture coordinate v = 0 addresses row 0. Image loaders flip accordingly.
struct TextureImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // 3 * width * height, row-major from the bottom

    float* texel(int x, int y) { return data.data() + 3 * (std::size_t(y) * width + x); }
    const float* texel(int x, int y) const {
        return data.data() + 3 * (std::size_t(y) * width + x);
    }
    Vec3 texel_rgb(int x, int y) const {
        const float* t = texel(x, y);
        return Vec3(t[0], t[1], t[2]);
    }
};

/// Indexed triangle mesh with optional per-corner texture coordinates and an
/// attached texture atlas. Instances are treated as immutable once built;
/// every operation that changes a mesh returns a new value. The texture is
/// shared between derived meshes.
struct TexturedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    // One UV triple per triangle. Present for all triangles or for none.
    std::vector<std::array<Vec2, 3>> corner_uvs;
    std::shared_ptr<const TextureImage> texture;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    bool has_uvs() const { return !corner_uvs.empty(); }
    bool has_texture() const { return texture != nullptr; }
};

/// Per-vertex eligibility flags for hole cutting and perturbation.
using RegionMask = std::vector<bool>;

/// Throws std::runtime_error if the mesh breaks a structural invariant:
/// triangle index out of range, repeated index within a triangle, UV count
/// not matching the triangle count, or texture channels outside [0, 1].
void validate_mesh(const TexturedMesh& mesh);

double triangle_area(const Vec3& p0, const Vec3& p1, const Vec3& p2);

/// Sum of all triangle areas. Degenerate triangles contribute 0.
double mesh_surface_area(const TexturedMesh& mesh);

/// The k eligible vertices nearest to `center` (center included), sorted by
/// (distance, index) with ties broken by the lower vertex index. Returns all
/// eligible vertices when fewer than k exist. `mask`, when given, restricts
/// the eligible set and must cover the whole mesh.
std::vector<int> vertex_knn(const TexturedMesh& mesh, int center, int k,
                            const RegionMask* mask = nullptr);

/// Removes the given vertices and every triangle touching them. Surviving
/// vertices keep their positions and relative order; surviving triangles are
/// re-indexed and keep their UV triples. The texture is shared, not copied.
TexturedMesh remove_vertices(const TexturedMesh& mesh, const std::vector<int>& doomed);

/// Bilinear texture lookup. Coordinates are clamped to the border (no wrap);
/// v = 0 maps to the bottom row, v = 1 to the top row.
Vec3 texture_lookup(const TextureImage& texture, const Vec2& uv);

/// Closed cycles of boundary edges (edges used by exactly one triangle),
/// each returned as the vertex indices along the cycle. A watertight mesh
/// yields an empty list. Throws on a non-manifold boundary configuration.
std::vector<std::vector<int>> boundary_loops(const TexturedMesh& mesh);

}  // namespace mcbench
