#pragma once

#include "mcbench/measure.hpp"
#include "mcbench/mesh.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mcbench {

/// Evaluation parameters. The sigma values scale the distance-to-score
/// mapping and come out of the calibration step; there are no built-in
/// defaults for them.
struct ScoreConfig {
    double sigma_shape = 0.0;    // m, > 0
    double sigma_texture = 0.0;  // RGB units, > 0 (unused when !use_texture)
    int samples = 100000;
    std::uint64_t seed = 0;
    bool use_texture = true;

    void validate() const;  // throws on non-positive sigma/samples
};

/// Key-value config file (sigma_shape, sigma_texture, samples, seed,
/// texture). Round-trips sigma values exactly.
ScoreConfig load_score_config(const std::filesystem::path& path);
void save_score_config(const ScoreConfig& config, const std::filesystem::path& path);

/// Scores for one (ground truth, reconstruction) pair.
/// In texture mode s_overall = s_area * (s_shape + s_texture) / 2; in
/// shape-only mode s_texture is NaN and s_overall = s_area * s_shape.
struct ScoreReport {
    double s_area = 0.0;
    double s_shape = 0.0;
    double s_texture = 0.0;
    double s_overall = 0.0;
    DirectedMeasure recon_to_gt;  // sampled on the reconstruction (X -> Y)
    DirectedMeasure gt_to_recon;  // sampled on the ground truth    (Y -> X)
    double area_recon = 0.0;      // A_X
    double area_gt = 0.0;         // A_Y
    ScoreConfig config;
    std::vector<std::string> flags;  // "zero_area_recon", "texture_degenerate", ...

    bool flagged(const std::string& flag) const;
};

/// Gaussian-shaped mapping from distance to score: exp(-d^2 / (2 sigma^2)).
/// Unit peak, so phi(0) = 1 and phi is strictly decreasing in d.
double phi(double d, double sigma);

/// 1 - |A_X - A_Y| / (A_X + A_Y). Symmetric and scale-invariant.
/// Throws when both areas are zero.
double area_score(double area_x, double area_y);

/// (h_xy * phi(d_xy) + h_yx * phi(d_yx)) / 2 over the shape distances.
double shape_score(const DirectedMeasure& xy, const DirectedMeasure& yx, double sigma_s);

/// Same combination over the texture distances.
double texture_score(const DirectedMeasure& xy, const DirectedMeasure& yx, double sigma_t);

/// s_area * (s_shape + s_texture) / 2. Inputs must lie in [0, 1].
double overall_score(double s_area, double s_shape, double s_texture);

/// Shape-only variant: s_area * s_shape.
double overall_score_shape_only(double s_area, double s_shape);

/// Full pipeline for one pair: builds both indices, runs both directed
/// passes and assembles the four scores. A zero-area mesh on either side
/// yields a zero-score report with a diagnostic flag instead of throwing.
/// Untextured input in texture mode zeroes the texture distance (the score
/// falls back to the mean hit rate) and flags the report.
ScoreReport score_pair(const TexturedMesh& gt, const TexturedMesh& recon,
                       const ScoreConfig& config);

/// Fits sigma to reference (distance, target score) pairs. One pair inverts
/// phi exactly: sigma = d / sqrt(-2 ln s). Several pairs are fit by
/// least-squares over sigma with a deterministic golden-section search.
/// Every pair needs d > 0 and a target strictly inside (0, 1).
double calibrate_sigma(const std::vector<std::pair<double, double>>& reference);

}  // namespace mcbench
