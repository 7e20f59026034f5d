#pragma once

#include "mcbench/mesh.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace mcbench {

/// Result of a closest-point query against one triangle or a whole mesh.
///
/// The distance is the two-component point-to-triangle distance: plane_dist
/// is the distance from the query point to its orthogonal projection onto
/// the triangle's plane, inplane_dist the in-plane distance from that
/// projection to the nearest point of the triangle, and total their sum.
/// A query is a hit when the projection lands inside the triangle, in which
/// case inplane_dist is exactly 0 and the foot equals the projection. Note
/// that for misses the total exceeds the Euclidean point-triangle distance.
struct Correspondence {
    Vec3 foot = Vec3::Zero();         // p1, nearest point of the triangle
    Vec3 plane_point = Vec3::Zero();  // p0, projection onto the triangle plane
    double plane_dist = 0.0;          // d0 >= 0
    double inplane_dist = 0.0;        // d1 >= 0, 0 iff hit
    double total = 0.0;               // d = d0 + d1
    bool hit = false;
    int triangle = -1;                // set by mesh-level queries
    Vec3 barycentric = Vec3::Zero();  // of foot within the triangle
    std::optional<Vec3> color;        // target color at foot, if textured
};

/// Two-component distance from a point to a single triangle.
/// Degenerate (zero-area) triangles fall back to the nearest point on their
/// longest edge segment, reported as a miss with plane_dist = 0.
Correspondence closest_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                      const Vec3& c);

/// Immutable bounding-volume hierarchy over the triangles of a mesh,
/// answering closest-triangle queries under the additive d0+d1 metric.
/// Euclidean box distances are valid pruning bounds for that metric since
/// the Euclidean point-triangle distance never exceeds d0+d1. Safe to query
/// concurrently.
class SpatialIndex {
public:
    SpatialIndex() = default;

    bool empty() const { return mesh_ == nullptr || mesh_->triangles.empty(); }
    const TexturedMesh& mesh() const { return *mesh_; }

    /// The Correspondence minimizing d over all triangles, ties broken by
    /// the lower triangle index. The target color is evaluated at the foot
    /// point via the triangle's barycentric UVs. Throws when empty.
    Correspondence closest(const Vec3& p) const;

private:
    friend SpatialIndex build_index(const TexturedMesh& mesh);
    friend SpatialIndex build_index(std::shared_ptr<const TexturedMesh> mesh);

    struct Node {
        Vec3 box_min, box_max;
        int left = -1;    // child node, -1 for leaves
        int right = -1;
        int begin = 0;    // leaf range into order_
        int count = 0;
    };

    double box_distance_sq(const Node& n, const Vec3& p) const;
    void build(int node, int begin, int end, std::vector<Vec3>& centroids);

    std::shared_ptr<const TexturedMesh> mesh_;
    std::vector<Node> nodes_;
    std::vector<int> order_;  // triangle indices, partitioned per leaf
};

/// Builds the acceleration structure. The mesh is copied into the index
/// (the texture image is shared). An empty mesh yields an empty index.
SpatialIndex build_index(const TexturedMesh& mesh);
SpatialIndex build_index(std::shared_ptr<const TexturedMesh> mesh);

/// Closest correspondence on the indexed mesh. Throws on an empty index.
Correspondence closest_on_mesh(const SpatialIndex& index, const Vec3& p);

}  // namespace mcbench
