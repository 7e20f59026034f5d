#include "mcbench/measure.hpp"

#include <stdexcept>
#include <vector>

namespace mcbench {

double pairwise_sum(const double* values, std::size_t count) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double sum = values[0];
        for (std::size_t i = 1; i < count; ++i) sum += values[i];
        return sum;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

DirectedMeasure directed_measure(const TexturedMesh& source, const SpatialIndex& target,
                                 int count, std::uint64_t seed) {
    if (count <= 0) throw std::invalid_argument("sample count must be positive");
    const std::vector<SurfaceSample> samples = sample_surface(source, count, seed);
    const bool textured = source.has_texture() && !target.empty() &&
                          target.mesh().has_texture();

    std::vector<double> shape_dists(samples.size());
    std::vector<double> tex_dists(textured ? samples.size() : 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Correspondence corr = target.closest(samples[i].position);
        shape_dists[i] = corr.total;
        if (corr.hit) ++hits;
        if (textured) tex_dists[i] = (*samples[i].color - *corr.color).norm();
    }

    DirectedMeasure out;
    out.n_samples = int(samples.size());
    out.mean_shape_dist = pairwise_sum(shape_dists.data(), shape_dists.size()) /
                          double(samples.size());
    out.mean_tex_dist =
        textured ? pairwise_sum(tex_dists.data(), tex_dists.size()) /
                       double(samples.size())
                 : 0.0;
    out.hit_rate = double(hits) / double(samples.size());
    return out;
}

}  // namespace mcbench
