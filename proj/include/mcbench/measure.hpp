#pragma once

#include "mcbench/closest_point.hpp"
#include "mcbench/sampling.hpp"

#include <cstdint>

namespace mcbench {

/// Aggregate of one directed surface-to-surface pass.
struct DirectedMeasure {
    double mean_shape_dist = 0.0;  // mean additive point-to-triangle distance (m)
    double mean_tex_dist = 0.0;    // mean Euclidean RGB distance, 0 if untextured
    double hit_rate = 0.0;         // hits / n_samples
    int n_samples = 0;
};

/// Samples `count` points on `source`, finds the closest correspondence on
/// the indexed target for each, and averages. Misses contribute their
/// distances to the means like hits do; only the hit rate tells them apart.
/// The texture term is 0 unless both meshes are textured. Reduction uses
/// fixed-order pairwise summation, so results do not depend on threading.
DirectedMeasure directed_measure(const TexturedMesh& source, const SpatialIndex& target,
                                 int count, std::uint64_t seed);

/// Fixed-order pairwise (binary cascade) sum; deterministic and more
/// accurate than naive accumulation for long vectors.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace mcbench
