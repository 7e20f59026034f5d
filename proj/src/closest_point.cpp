#include "mcbench/closest_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcbench {

namespace {

constexpr int kLeafSize = 4;

// Nearest point on segment [s0, s1], with the parameter t in [0, 1].
Vec3 closest_on_segment(const Vec3& p, const Vec3& s0, const Vec3& s1, double& t) {
    const Vec3 d = s1 - s0;
    const double len_sq = d.squaredNorm();
    if (len_sq == 0.0) {
        t = 0.0;
        return s0;
    }
    t = std::clamp((p - s0).dot(d) / len_sq, 0.0, 1.0);
    return s0 + t * d;
}

// Zero-area triangles have no plane; the nearest point of their longest edge
// stands in for the foot and the query is a miss with no plane component.
Correspondence degenerate_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                   const Vec3& c) {
    const double ab = (b - a).squaredNorm();
    const double bc = (c - b).squaredNorm();
    const double ca = (a - c).squaredNorm();
    double t = 0.0;
    Correspondence res;
    if (ab >= bc && ab >= ca) {
        res.foot = closest_on_segment(p, a, b, t);
        res.barycentric = Vec3(1.0 - t, t, 0.0);
    } else if (bc >= ca) {
        res.foot = closest_on_segment(p, b, c, t);
        res.barycentric = Vec3(0.0, 1.0 - t, t);
    } else {
        res.foot = closest_on_segment(p, c, a, t);
        res.barycentric = Vec3(t, 0.0, 1.0 - t);
    }
    res.plane_point = p;
    res.plane_dist = 0.0;
    res.inplane_dist = (p - res.foot).norm();
    res.total = res.inplane_dist;
    res.hit = false;
    return res;
}

}  // namespace

Correspondence closest_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                      const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 normal = ab.cross(ac);
    const double normal_len = normal.norm();
    if (normal_len == 0.0) return degenerate_triangle(p, a, b, c);

    Correspondence res;
    const Vec3 n_unit = normal / normal_len;
    const double signed_dist = (p - a).dot(n_unit);
    res.plane_point = p - signed_dist * n_unit;
    res.plane_dist = std::abs(signed_dist);

    // Region walk (Ericson): classify the projection against the triangle's
    // vertex, edge and interior Voronoi regions. Evaluated with p directly,
    // which selects the same region as the in-plane projection would.
    const Vec3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    const auto finish_miss = [&](const Vec3& foot, const Vec3& bary) {
        res.foot = foot;
        res.barycentric = bary;
        res.inplane_dist = (res.plane_point - foot).norm();
        res.total = res.plane_dist + res.inplane_dist;
        res.hit = false;
        return res;
    };

    if (d1 <= 0.0 && d2 <= 0.0) return finish_miss(a, Vec3(1, 0, 0));

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return finish_miss(b, Vec3(0, 1, 0));

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return finish_miss(a + v * ab, Vec3(1.0 - v, v, 0.0));
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return finish_miss(c, Vec3(0, 0, 1));

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return finish_miss(a + w * ac, Vec3(1.0 - w, 0.0, w));
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return finish_miss(b + w * (c - b), Vec3(0.0, 1.0 - w, w));
    }

    // Interior region: the projection is the foot and the in-plane term
    // vanishes exactly.
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom;
    const double w = vc * denom;
    res.foot = res.plane_point;
    res.barycentric = Vec3(1.0 - v - w, v, w);
    res.inplane_dist = 0.0;
    res.total = res.plane_dist;
    res.hit = true;
    return res;
}

double SpatialIndex::box_distance_sq(const Node& n, const Vec3& p) const {
    double sum = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const double d =
            std::max({n.box_min[axis] - p[axis], 0.0, p[axis] - n.box_max[axis]});
        sum += d * d;
    }
    return sum;
}

void SpatialIndex::build(int node, int begin, int end, std::vector<Vec3>& centroids) {
    const TexturedMesh& m = *mesh_;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    Vec3 centroid_lo = lo;
    Vec3 centroid_hi = hi;
    for (int i = begin; i < end; ++i) {
        const auto& tri = m.triangles[order_[i]];
        for (int c = 0; c < 3; ++c) {
            lo = lo.cwiseMin(m.vertices[tri[c]]);
            hi = hi.cwiseMax(m.vertices[tri[c]]);
        }
        centroid_lo = centroid_lo.cwiseMin(centroids[order_[i]]);
        centroid_hi = centroid_hi.cwiseMax(centroids[order_[i]]);
    }
    nodes_[node].box_min = lo;
    nodes_[node].box_max = hi;

    if (end - begin <= kLeafSize) {
        nodes_[node].begin = begin;
        nodes_[node].count = end - begin;
        return;
    }

    int axis = 0;
    const Vec3 extent = centroid_hi - centroid_lo;
    if (extent[1] > extent[axis]) axis = 1;
    if (extent[2] > extent[axis]) axis = 2;

    // Median split on the centroid coordinate; the index tie-break keeps the
    // partition a total order so identical meshes always build identically.
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int ta, int tb) {
                         const double ca = centroids[ta][axis];
                         const double cb = centroids[tb][axis];
                         return ca < cb || (ca == cb && ta < tb);
                     });

    const int left = int(nodes_.size());
    nodes_.emplace_back();
    const int right = int(nodes_.size());
    nodes_.emplace_back();
    nodes_[node].left = left;
    nodes_[node].right = right;
    build(left, begin, mid, centroids);
    build(right, mid, end, centroids);
}

Correspondence SpatialIndex::closest(const Vec3& p) const {
    if (empty())
        throw std::runtime_error("closest-point query on an empty mesh index");
    const TexturedMesh& m = *mesh_;

    Correspondence best;
    best.total = std::numeric_limits<double>::infinity();
    best.triangle = std::numeric_limits<int>::max();

    // Depth-first traversal, nearer child first. A subtree is skipped only
    // when its box is strictly farther than the best total; the Euclidean
    // bound never exceeds any triangle's additive distance, so no triangle
    // that could win (or tie) is ever pruned.
    struct Entry {
        int node;
        double bound_sq;
    };
    std::vector<Entry> stack;
    stack.reserve(64);
    stack.push_back({0, box_distance_sq(nodes_[0], p)});
    while (!stack.empty()) {
        const Entry entry = stack.back();
        stack.pop_back();
        if (entry.bound_sq > best.total * best.total) continue;
        const Node& node = nodes_[entry.node];
        if (node.left < 0) {
            for (int i = node.begin; i < node.begin + node.count; ++i) {
                const int tri = order_[i];
                const auto& tv = m.triangles[tri];
                Correspondence cand = closest_point_triangle(
                    p, m.vertices[tv[0]], m.vertices[tv[1]], m.vertices[tv[2]]);
                cand.triangle = tri;
                if (cand.total < best.total ||
                    (cand.total == best.total && cand.triangle < best.triangle))
                    best = cand;
            }
            continue;
        }
        const double left_sq = box_distance_sq(nodes_[node.left], p);
        const double right_sq = box_distance_sq(nodes_[node.right], p);
        if (left_sq < right_sq) {
            stack.push_back({node.right, right_sq});
            stack.push_back({node.left, left_sq});
        } else {
            stack.push_back({node.left, left_sq});
            stack.push_back({node.right, right_sq});
        }
    }

    if (m.has_texture()) {
        const auto& uv = m.corner_uvs[best.triangle];
        const Vec2 foot_uv = best.barycentric[0] * uv[0] +
                             best.barycentric[1] * uv[1] +
                             best.barycentric[2] * uv[2];
        best.color = texture_lookup(*m.texture, foot_uv);
    }
    return best;
}

SpatialIndex build_index(std::shared_ptr<const TexturedMesh> mesh) {
    SpatialIndex index;
    if (!mesh) return index;
    validate_mesh(*mesh);
    index.mesh_ = std::move(mesh);
    const TexturedMesh& m = *index.mesh_;
    const int n = m.triangle_count();
    if (n == 0) return index;

    index.order_.resize(n);
    std::iota(index.order_.begin(), index.order_.end(), 0);
    std::vector<Vec3> centroids(n);
    for (int t = 0; t < n; ++t) {
        const auto& tri = m.triangles[t];
        centroids[t] =
            (m.vertices[tri[0]] + m.vertices[tri[1]] + m.vertices[tri[2]]) / 3.0;
    }
    index.nodes_.reserve(std::size_t(2) * n);
    index.nodes_.emplace_back();
    index.build(0, 0, n, centroids);
    return index;
}

SpatialIndex build_index(const TexturedMesh& mesh) {
    return build_index(std::make_shared<const TexturedMesh>(mesh));
}

Correspondence closest_on_mesh(const SpatialIndex& index, const Vec3& p) {
    return index.closest(p);
}

}  // namespace mcbench
