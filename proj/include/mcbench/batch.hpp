#pragma once

#include "mcbench/degrade.hpp"
#include "mcbench/scoring.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcbench {

/// One evaluation sample: a ground-truth mesh and its reconstruction,
/// matched by file stem. recon_path is empty when the counterpart is missing.
struct BatchEntry {
    std::string id;
    std::filesystem::path gt_path;
    std::filesystem::path recon_path;
};

/// All .obj files in a directory as (stem, path), sorted by stem.
/// Duplicate stems are an error.
std::vector<std::pair<std::string, std::filesystem::path>> list_meshes(
    const std::filesystem::path& dir);

/// Matches ground-truth and reconstruction directories by file stem, sorted
/// by id. Ground-truth files without a counterpart get an empty recon_path.
std::vector<BatchEntry> match_stems(const std::filesystem::path& gt_dir,
                                    const std::filesystem::path& recon_dir);

/// Per-sample seed: base seed XOR a stable 64-bit hash of the sample id, so
/// adding or removing samples never shifts another sample's randomness.
std::uint64_t sample_seed(std::uint64_t base, std::string_view id);

// ---------------------------------------------------------------------------
// gen-partial

struct GenPartialOptions {
    int holes = 40;
    double fraction = 0.02;
    std::uint64_t seed = 0;
    std::filesystem::path mask_path;  // optional: eligible vertex indices
    int jobs = 1;
};

/// Cuts partial scans for every mesh in input_dir, writing bundles with
/// matching stems plus a manifest.json recording the per-sample seeds.
/// Returns 0 on full success, 2 when any sample failed (reported per sample).
int run_gen_partial(const std::filesystem::path& input_dir,
                    const std::filesystem::path& output_dir,
                    const GenPartialOptions& options, std::ostream& log);

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOptions {
    int limit = 0;  // number of samples used, 0 = all
    int holes = 40;
    double fraction = 0.02;
    double shape_noise = 0.0;   // per-coordinate sigma; 0 = 0.5% of bbox diagonal
    double local_radius = 0.0;  // 0 = 5% of bbox diagonal
    int local_regions = 8;
    double texture_noise = 0.1;
    double filled_target = 0.5;          // target score of the hole-filled baseline
    double texture_noise_target = 0.5;   // target score of the texture-noise baseline
    std::optional<double> global_noise_target;  // adds the global-noise pair to the fit
    int samples = 100000;
    std::uint64_t seed = 0;
    bool use_texture = true;
    int jobs = 1;
};

/// Builds the baseline suite (identity, partial, hole-filled partial, global
/// and local shape noise, texture noise) on a subset of the ground-truth
/// meshes, measures mean distances, fits sigma_shape and sigma_texture
/// against the configured target scores and writes the score config file.
/// Throws when every calibration distance is zero.
int run_calibrate(const std::filesystem::path& gt_dir,
                  const std::filesystem::path& config_out,
                  const CalibrateOptions& options, std::ostream& log);

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
    ScoreConfig config;
    std::string method;  // label in reports; defaults to the recon dir name
    int jobs = 1;
};

struct SampleRow {
    std::string id;
    ScoreReport report;
};

struct ScoreStats {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

ScoreStats score_stats(const std::vector<double>& values);

/// Histogram with 50 uniform bins over [0, 1]; 1.0 falls in the last bin.
std::array<int, 50> histogram50(const std::vector<double>& values);

struct AggregateReport {
    std::string method;
    ScoreConfig config;
    std::vector<SampleRow> rows;  // ordered by id

    std::vector<double> shape_scores() const;
    std::vector<double> texture_scores() const;
    std::vector<double> overall_scores() const;
    bool has_texture_scores() const;
};

/// Scores every entry (missing or unreadable samples score 0 and are
/// flagged). Pairs run on a worker pool of `jobs` threads with per-sample
/// seeds, so outputs are identical for any job count.
AggregateReport evaluate_batch(const std::vector<BatchEntry>& entries,
                               const EvalOptions& options, std::ostream& log);

/// Fixed-header per-sample CSV (fractions, 12 significant digits).
void write_sample_csv(const AggregateReport& report, const std::filesystem::path& path);

/// Aggregate JSON: mean/std per score in percent, 50-bin histograms,
/// (shape, texture) correlation pairs and the config echo.
void write_aggregate_json(const AggregateReport& report, const std::filesystem::path& path);

/// Full eval pipeline: match stems, score, write <out_base>.csv and
/// <out_base>.json. Returns 0 on full success, 2 when any sample was flagged.
int run_eval(const std::filesystem::path& gt_dir, const std::filesystem::path& recon_dir,
             const std::filesystem::path& out_base, const EvalOptions& options,
             std::ostream& log);

// ---------------------------------------------------------------------------
// report

/// Side-by-side comparison of aggregate JSONs: a text table (mean +/- std in
/// percent, rows sorted by overall score descending) plus per-method
/// histogram and correlation CSV files under plot_dir (skipped when empty).
/// Aggregates with differing configs are still reported but annotated.
int run_report(const std::vector<std::filesystem::path>& aggregate_paths,
               const std::filesystem::path& plot_dir, std::ostream& table_out,
               std::ostream& log);

}  // namespace mcbench
