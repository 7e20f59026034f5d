#include "mcbench/degrade.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace mcbench;

TEST_SUITE("degrade") {

TEST_CASE("cut_hole removes the k nearest vertices") {
    const TexturedMesh grid = testutil::make_grid(10, 10, 1.0);
    const int center = 5 * 10 + 5;
    const TexturedMesh cut = cut_hole(grid, center, 7);
    CHECK(cut.vertex_count() == 93);

    // The removed set is exactly the brute-force 7 nearest to the center.
    const auto doomed = testutil::brute_knn(grid, grid.vertices[center], 7);
    std::vector<Vec3> survivors;
    for (int v = 0; v < 100; ++v)
        if (std::find(doomed.begin(), doomed.end(), v) == doomed.end())
            survivors.push_back(grid.vertices[v]);
    REQUIRE(int(survivors.size()) == cut.vertex_count());
    for (int v = 0; v < cut.vertex_count(); ++v)
        CHECK(cut.vertices[v] == survivors[v]);
}

TEST_CASE("generate_partial removes holes * k vertices") {
    const TexturedMesh grid = testutil::make_grid(20, 20, 0.5);  // 400 vertices
    HoleSpec spec;
    spec.holes = 5;
    spec.fraction = 0.03;  // k = 12
    spec.seed = 9;

    std::vector<HoleTrace> trace;
    const TexturedMesh partial = generate_partial(grid, spec, &trace);
    CHECK(partial.vertex_count() == 400 - 5 * 12);
    REQUIRE(trace.size() == 5);

    std::set<int> removed_all;
    for (const auto& hole : trace) {
        CHECK(hole.removed.size() == 12);
        // The center is one of its own hole's removed vertices.
        CHECK(std::find(hole.removed.begin(), hole.removed.end(), hole.center) !=
              hole.removed.end());
        for (int v : hole.removed) {
            CHECK(removed_all.insert(v).second);  // holes never overlap
            CHECK(v >= 0);
            CHECK(v < 400);
        }
    }
    CHECK_NOTHROW(validate_mesh(partial));
}

TEST_CASE("generate_partial is deterministic and seed-sensitive") {
    const TexturedMesh sphere = testutil::make_sphere(12, 12, 1.0, true);
    HoleSpec spec;
    spec.holes = 4;
    spec.fraction = 0.05;
    spec.seed = 1;

    const TexturedMesh a = generate_partial(sphere, spec);
    const TexturedMesh b = generate_partial(sphere, spec);
    REQUIRE(a.vertex_count() == b.vertex_count());
    for (int v = 0; v < a.vertex_count(); ++v) CHECK(a.vertices[v] == b.vertices[v]);
    CHECK(a.triangles == b.triangles);

    spec.seed = 2;
    const TexturedMesh c = generate_partial(sphere, spec);
    std::vector<HoleTrace> ta, tc;
    spec.seed = 1;
    generate_partial(sphere, spec, &ta);
    spec.seed = 2;
    generate_partial(sphere, spec, &tc);
    bool centers_differ = false;
    for (std::size_t h = 0; h < ta.size(); ++h)
        if (ta[h].center != tc[h].center) centers_differ = true;
    CHECK(centers_differ);
    CHECK(c.vertex_count() == a.vertex_count());
}

TEST_CASE("hole centers avoid already-removed vertices") {
    const TexturedMesh grid = testutil::make_grid(15, 15, 1.0);
    HoleSpec spec;
    spec.holes = 10;
    spec.fraction = 0.04;  // k = 9
    spec.seed = 77;

    std::vector<HoleTrace> trace;
    generate_partial(grid, spec, &trace);
    std::set<int> seen;
    for (const auto& hole : trace) {
        // Center must not have been removed by an earlier hole.
        CHECK(seen.count(hole.center) == 0);
        for (int v : hole.removed) seen.insert(v);
    }
}

TEST_CASE("exhausting the mesh short-circuits") {
    const TexturedMesh grid = testutil::make_grid(4, 4, 1.0);  // 16 vertices
    HoleSpec spec;
    spec.holes = 10;
    spec.fraction = 0.25;  // k = 4, 10 holes want 40 > 16
    spec.seed = 3;

    std::vector<HoleTrace> trace;
    const TexturedMesh out = generate_partial(grid, spec, &trace);
    CHECK(out.vertex_count() == 0);
    CHECK(trace.size() == 4);  // 4 holes of 4 vertices each drained the mesh
}

TEST_CASE("mask restricts centers and removals") {
    const TexturedMesh grid = testutil::make_grid(10, 10, 1.0);
    RegionMask mask(100, false);
    // Eligible: left half only.
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 5; ++i) mask[j * 10 + i] = true;

    HoleSpec spec;
    spec.holes = 3;
    spec.fraction = 0.05;  // k = 5
    spec.seed = 12;
    spec.mask = mask;

    std::vector<HoleTrace> trace;
    const TexturedMesh out = generate_partial(grid, spec, &trace);
    CHECK(out.vertex_count() == 100 - 3 * 5);
    for (const auto& hole : trace)
        for (int v : hole.removed) CHECK(mask[v]);

    HoleSpec bad = spec;
    bad.mask = RegionMask(42, true);
    CHECK_THROWS(static_cast<void>(generate_partial(grid, bad)));
}

TEST_CASE("hole spec validation") {
    const TexturedMesh grid = testutil::make_grid(4, 4, 1.0);
    HoleSpec spec;
    spec.holes = -1;
    CHECK_THROWS(static_cast<void>(generate_partial(grid, spec)));
    spec.holes = 1;
    spec.fraction = -0.5;
    CHECK_THROWS(static_cast<void>(generate_partial(grid, spec)));
    spec.fraction = 1.5;
    CHECK_THROWS(static_cast<void>(generate_partial(grid, spec)));

    spec.fraction = 0.0;  // k = 0: nothing happens
    const TexturedMesh same = generate_partial(grid, spec);
    CHECK(same.vertex_count() == 16);

    spec.holes = 0;
    spec.fraction = 0.5;
    CHECK(generate_partial(grid, spec).vertex_count() == 16);
}

TEST_CASE("global shape noise displaces every vertex independently") {
    const TexturedMesh sphere = testutil::make_sphere(10, 10, 1.0, true);
    const double sigma = 0.01;
    const TexturedMesh noisy =
        add_shape_noise(sphere, sigma, ShapeNoiseMode::global(), 5);

    REQUIRE(noisy.vertex_count() == sphere.vertex_count());
    CHECK(noisy.triangles == sphere.triangles);
    CHECK(noisy.texture == sphere.texture);

    double sum_sq = 0.0;
    int moved = 0;
    for (int v = 0; v < sphere.vertex_count(); ++v) {
        const Vec3 d = noisy.vertices[v] - sphere.vertices[v];
        if (d.norm() > 0) ++moved;
        sum_sq += d.squaredNorm();
    }
    CHECK(moved == sphere.vertex_count());
    // E[|d|^2] = 3 sigma^2; with 102 vertices the sample mean is loose.
    const double mean_sq = sum_sq / sphere.vertex_count();
    CHECK(mean_sq > 3 * sigma * sigma * 0.5);
    CHECK(mean_sq < 3 * sigma * sigma * 2.0);

    // Determinism and seed sensitivity.
    const TexturedMesh again =
        add_shape_noise(sphere, sigma, ShapeNoiseMode::global(), 5);
    for (int v = 0; v < sphere.vertex_count(); ++v)
        CHECK(again.vertices[v] == noisy.vertices[v]);
    const TexturedMesh other =
        add_shape_noise(sphere, sigma, ShapeNoiseMode::global(), 6);
    int same = 0;
    for (int v = 0; v < sphere.vertex_count(); ++v)
        if (other.vertices[v] == noisy.vertices[v]) ++same;
    CHECK(same == 0);

    CHECK_THROWS(static_cast<void>(
        add_shape_noise(sphere, -0.1, ShapeNoiseMode::global(), 5)));
}

TEST_CASE("local shape noise leaves distant vertices bit-identical") {
    const TexturedMesh grid = testutil::make_grid(20, 20, 1.0);
    const TexturedMesh noisy =
        add_shape_noise(grid, 0.05, ShapeNoiseMode::local(2.0, 3), 17);

    int moved = 0, still = 0;
    for (int v = 0; v < grid.vertex_count(); ++v) {
        if (noisy.vertices[v] == grid.vertices[v])
            ++still;
        else
            ++moved;
    }
    // Three radius-2 balls on a 19x19 grid touch some but not all vertices.
    CHECK(moved > 0);
    CHECK(still > 0);

    // Moved vertices must lie within one of the selected regions; verify by
    // re-running with the same seed and checking the same set moves.
    const TexturedMesh again =
        add_shape_noise(grid, 0.05, ShapeNoiseMode::local(2.0, 3), 17);
    for (int v = 0; v < grid.vertex_count(); ++v)
        CHECK((again.vertices[v] == noisy.vertices[v]));
}

TEST_CASE("texture noise clamps to the unit interval") {
    const auto base = testutil::make_gradient_texture(16, 16);
    const TextureImage noisy = add_texture_noise(*base, 0.2, 21);
    REQUIRE(noisy.width == 16);
    REQUIRE(noisy.height == 16);
    REQUIRE(noisy.data.size() == base->data.size());

    int changed = 0;
    for (std::size_t i = 0; i < noisy.data.size(); ++i) {
        CHECK(noisy.data[i] >= 0.0f);
        CHECK(noisy.data[i] <= 1.0f);
        if (noisy.data[i] != base->data[i]) ++changed;
    }
    CHECK(changed > int(noisy.data.size() / 2));

    const TextureImage again = add_texture_noise(*base, 0.2, 21);
    CHECK(again.data == noisy.data);
}

TEST_CASE("hole filling closes every loop without moving vertices") {
    const TexturedMesh sphere = testutil::make_sphere(14, 14, 1.0, true);
    HoleSpec spec;
    spec.holes = 6;
    spec.fraction = 0.03;
    spec.seed = 8;
    const TexturedMesh partial = generate_partial(sphere, spec);
    REQUIRE_FALSE(boundary_loops(partial).empty());

    const TexturedMesh filled = fill_holes_baseline(partial);
    CHECK(boundary_loops(filled).empty());
    CHECK_NOTHROW(validate_mesh(filled));

    // Original vertices survive in place; only centroids are appended.
    REQUIRE(filled.vertex_count() >= partial.vertex_count());
    for (int v = 0; v < partial.vertex_count(); ++v)
        CHECK(filled.vertices[v] == partial.vertices[v]);

    // Filling is idempotent on a closed mesh.
    const TexturedMesh again = fill_holes_baseline(filled);
    CHECK(again.vertex_count() == filled.vertex_count());
    CHECK(again.triangle_count() == filled.triangle_count());

    // The filled surface is textured like its input.
    CHECK(filled.has_uvs());
    CHECK(filled.texture == partial.texture);
}

TEST_CASE("filling an open grid patches its outer border too") {
    const TexturedMesh grid = testutil::make_grid(6, 6, 1.0);
    const TexturedMesh filled = fill_holes_baseline(grid);
    CHECK(boundary_loops(filled).empty());
    CHECK(filled.vertex_count() == 37);  // one centroid for the border loop
    CHECK(filled.triangle_count() == grid.triangle_count() + 20);
}

}  // TEST_SUITE
