#pragma once

// Shared mesh builders and independent reference implementations for tests.
// The reference routines deliberately use different formulas than the library
// (sign-based barycentric classification, full sorts) so agreement is
// meaningful.

#include "mcbench/closest_point.hpp"
#include "mcbench/mesh.hpp"
#include "mcbench/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

using mcbench::RandomStream;
using mcbench::TextureImage;
using mcbench::TexturedMesh;
using mcbench::Vec2;
using mcbench::Vec3;

inline std::shared_ptr<const TextureImage> make_checker_texture(int w, int h,
                                                                int cell) {
    TextureImage img;
    img.width = w;
    img.height = h;
    img.data.resize(3 * std::size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool on = ((x / cell) + (y / cell)) % 2 == 0;
            float* t = img.texel(x, y);
            t[0] = on ? 0.9f : 0.1f;
            t[1] = on ? 0.2f : 0.7f;
            t[2] = on ? 0.1f : 0.9f;
        }
    return std::make_shared<const TextureImage>(std::move(img));
}

inline std::shared_ptr<const TextureImage> make_gradient_texture(int w, int h) {
    TextureImage img;
    img.width = w;
    img.height = h;
    img.data.resize(3 * std::size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float* t = img.texel(x, y);
            t[0] = w > 1 ? float(x) / float(w - 1) : 0.5f;
            t[1] = h > 1 ? float(y) / float(h - 1) : 0.5f;
            t[2] = 0.25f;
        }
    return std::make_shared<const TextureImage>(std::move(img));
}

inline std::shared_ptr<const TextureImage> make_solid_texture(float r, float g,
                                                              float b) {
    TextureImage img;
    img.width = 2;
    img.height = 2;
    img.data = {r, g, b, r, g, b, r, g, b, r, g, b};
    return std::make_shared<const TextureImage>(std::move(img));
}

// Planar grid in the z = 0 plane, nx * ny vertices, spacing `s`.
inline TexturedMesh make_grid(int nx, int ny, double s, bool textured = false) {
    TexturedMesh mesh;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) mesh.vertices.emplace_back(i * s, j * s, 0.0);
    const auto vid = [nx](int i, int j) { return j * nx + i; };
    const auto uv = [&](int i, int j) {
        return Vec2(double(i) / (nx - 1), double(j) / (ny - 1));
    };
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
            if (textured) {
                mesh.corner_uvs.push_back({uv(i, j), uv(i + 1, j), uv(i + 1, j + 1)});
                mesh.corner_uvs.push_back({uv(i, j), uv(i + 1, j + 1), uv(i, j + 1)});
            }
        }
    if (textured) mesh.texture = make_checker_texture(64, 64, 8);
    return mesh;
}

// UV sphere with `rings` latitude rings of `segments` vertices plus two
// poles: rings * segments + 2 vertices.
inline TexturedMesh make_sphere(int rings, int segments, double radius,
                                bool textured = false) {
    TexturedMesh mesh;
    const double pi = 3.14159265358979323846;
    for (int r = 0; r < rings; ++r) {
        const double theta = pi * double(r + 1) / double(rings + 1);
        for (int s = 0; s < segments; ++s) {
            const double lon = 2.0 * pi * double(s) / double(segments);
            mesh.vertices.emplace_back(radius * std::sin(theta) * std::cos(lon),
                                       radius * std::sin(theta) * std::sin(lon),
                                       radius * std::cos(theta));
        }
    }
    const int top = int(mesh.vertices.size());
    mesh.vertices.emplace_back(0.0, 0.0, radius);
    const int bottom = top + 1;
    mesh.vertices.emplace_back(0.0, 0.0, -radius);

    const auto vid = [segments](int r, int s) { return r * segments + s % segments; };
    const auto uv = [&](int r, int s) {
        // s may equal segments at the seam; corner UVs are per triangle, so
        // the wrap stays continuous.
        return Vec2(double(s) / segments, 1.0 - double(r + 1) / (rings + 1));
    };
    for (int s = 0; s < segments; ++s) {
        mesh.triangles.push_back({top, vid(0, s), vid(0, s + 1)});
        if (textured)
            mesh.corner_uvs.push_back({Vec2((s + 0.5) / segments, 1.0), uv(0, s),
                                       Vec2(double(s + 1) / segments, uv(0, s).y())});
    }
    for (int r = 0; r + 1 < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            const int a = vid(r, s), b = vid(r, s + 1);
            const int c = vid(r + 1, s), d = vid(r + 1, s + 1);
            mesh.triangles.push_back({a, c, d});
            mesh.triangles.push_back({a, d, b});
            if (textured) {
                const Vec2 ua = uv(r, s), ub = uv(r, s + 1);
                const Vec2 uc = uv(r + 1, s), ud = uv(r + 1, s + 1);
                mesh.corner_uvs.push_back({ua, uc, ud});
                mesh.corner_uvs.push_back({ua, ud, ub});
            }
        }
    for (int s = 0; s < segments; ++s) {
        mesh.triangles.push_back({bottom, vid(rings - 1, s + 1), vid(rings - 1, s)});
        if (textured)
            mesh.corner_uvs.push_back({Vec2((s + 0.5) / segments, 0.0),
                                       Vec2(double(s + 1) / segments,
                                            uv(rings - 1, s).y()),
                                       uv(rings - 1, s)});
    }
    if (textured) mesh.texture = make_checker_texture(64, 64, 8);
    return mesh;
}

inline TexturedMesh make_cube() {
    TexturedMesh mesh;
    for (int i = 0; i < 8; ++i)
        mesh.vertices.emplace_back(double(i & 1), double((i >> 1) & 1),
                                   double((i >> 2) & 1));
    mesh.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6},
                      {0, 1, 4}, {1, 5, 4}, {2, 6, 3}, {3, 6, 7},
                      {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
    return mesh;
}

// Random triangle soup for oracle comparisons.
inline TexturedMesh random_soup(RandomStream& rng, int n_tris, double extent) {
    TexturedMesh mesh;
    for (int t = 0; t < n_tris; ++t) {
        const int base = int(mesh.vertices.size());
        for (int c = 0; c < 3; ++c)
            mesh.vertices.emplace_back(rng.next_unit() * extent,
                                       rng.next_unit() * extent,
                                       rng.next_unit() * extent);
        mesh.triangles.push_back({base, base + 1, base + 2});
    }
    return mesh;
}

// Full-sort k-nearest-neighbour reference (distance, then index).
inline std::vector<int> brute_knn(const TexturedMesh& mesh, const Vec3& center, int k,
                                  const std::vector<bool>* mask = nullptr) {
    std::vector<std::pair<double, int>> order;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (mask && !(*mask)[v]) continue;
        order.emplace_back((mesh.vertices[v] - center).squaredNorm(), v);
    }
    std::sort(order.begin(), order.end());
    std::vector<int> out;
    for (int i = 0; i < std::min<int>(k, int(order.size())); ++i)
        out.push_back(order[i].second);
    return out;
}

// Brute-force closest correspondence with the library kernel; validates the
// index traversal and tie-break, not the kernel itself.
inline mcbench::Correspondence brute_closest(const TexturedMesh& mesh, const Vec3& p) {
    mcbench::Correspondence best;
    best.total = std::numeric_limits<double>::infinity();
    best.triangle = std::numeric_limits<int>::max();
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles[t];
        mcbench::Correspondence cand = mcbench::closest_point_triangle(
            p, mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        cand.triangle = t;
        if (cand.total < best.total ||
            (cand.total == best.total && cand.triangle < best.triangle))
            best = cand;
    }
    return best;
}

struct RefDistance {
    double d0 = 0.0;
    double d1 = 0.0;
    double d = 0.0;
    bool hit = false;
};

// Independent two-component distance: barycentric sign classification for
// the hit test, per-edge segment distances for the in-plane term.
inline RefDistance ref_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                                      const Vec3& c) {
    RefDistance ref;
    const Vec3 n = (b - a).cross(c - a);
    const Vec3 n_unit = n / n.norm();
    const double signed_dist = (p - a).dot(n_unit);
    ref.d0 = std::abs(signed_dist);
    const Vec3 p0 = p - signed_dist * n_unit;

    const double full = n.dot(n_unit);
    const double l0 = (b - p0).cross(c - p0).dot(n_unit) / full;
    const double l1 = (c - p0).cross(a - p0).dot(n_unit) / full;
    const double l2 = (a - p0).cross(b - p0).dot(n_unit) / full;
    if (l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0) {
        ref.hit = true;
        ref.d1 = 0.0;
    } else {
        const auto seg_dist = [&p0](const Vec3& s0, const Vec3& s1) {
            const Vec3 d = s1 - s0;
            const double t =
                std::clamp((p0 - s0).dot(d) / d.squaredNorm(), 0.0, 1.0);
            return (p0 - (s0 + t * d)).norm();
        };
        ref.d1 = std::min({seg_dist(a, b), seg_dist(b, c), seg_dist(c, a)});
    }
    ref.d = ref.d0 + ref.d1;
    return ref;
}

inline double chi_square(const std::vector<double>& observed,
                         const std::vector<double>& expected) {
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("mcbench_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace testutil
