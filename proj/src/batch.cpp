#include "mcbench/batch.hpp"

#include "mcbench/obj_io.hpp"
#include "mcbench/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mcbench {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must
// not touch shared mutable state; exceptions escaping fn abort the batch.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (std::thread& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) out += ';';
        out += flags[i];
    }
    return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create file: " + path.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

// Directory name usable as a method label ("out/recon/" -> "recon").
std::string dir_label(const fs::path& dir) {
    fs::path p = dir.lexically_normal();
    if (p.filename().empty() || p.filename() == ".") p = p.parent_path();
    const std::string name = p.filename().string();
    return name.empty() ? p.string() : name;
}

ordered_json config_json(const ScoreConfig& config) {
    ordered_json j;
    j["sigma_shape"] = config.sigma_shape;
    j["sigma_texture"] = config.sigma_texture;
    j["samples"] = config.samples;
    j["seed"] = config.seed;
    j["texture"] = config.use_texture;
    return j;
}

}  // namespace

std::vector<std::pair<std::string, fs::path>> list_meshes(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<std::pair<std::string, fs::path>> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".obj") continue;
        out.emplace_back(entry.path().stem().string(), entry.path());
    }
    std::sort(out.begin(), out.end());
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].first == out[i - 1].first)
            throw std::runtime_error("duplicate mesh stem '" + out[i].first + "' in " +
                                     dir.string());
    return out;
}

std::vector<BatchEntry> match_stems(const fs::path& gt_dir, const fs::path& recon_dir) {
    const auto gt = list_meshes(gt_dir);
    const auto recon = list_meshes(recon_dir);
    std::map<std::string, fs::path> recon_by_stem(recon.begin(), recon.end());

    std::vector<BatchEntry> entries;
    entries.reserve(gt.size());
    for (const auto& [stem, path] : gt) {
        BatchEntry entry;
        entry.id = stem;
        entry.gt_path = path;
        const auto it = recon_by_stem.find(stem);
        if (it != recon_by_stem.end()) entry.recon_path = it->second;
        entries.push_back(entry);
    }
    return entries;
}

std::uint64_t sample_seed(std::uint64_t base, std::string_view id) {
    return base ^ fnv1a64(id);
}

// ---------------------------------------------------------------------------
// gen-partial

int run_gen_partial(const fs::path& input_dir, const fs::path& output_dir,
                    const GenPartialOptions& options, std::ostream& log) {
    const auto meshes = list_meshes(input_dir);
    fs::create_directories(output_dir);
    if (meshes.empty())
        log << "warning: no .obj meshes found in " << input_dir.string() << "\n";

    struct Result {
        std::uint64_t seed = 0;
        int vertices_in = 0;
        int vertices_out = 0;
        int holes_cut = 0;
        fs::path output;
        std::string error;
    };
    std::vector<Result> results(meshes.size());

    parallel_for(int(meshes.size()), options.jobs, [&](int i) {
        const auto& [stem, path] = meshes[i];
        Result& r = results[i];
        r.seed = sample_seed(options.seed, stem);
        try {
            const MeshBundle bundle = load_mesh(path);
            HoleSpec spec;
            spec.holes = options.holes;
            spec.fraction = options.fraction;
            spec.seed = r.seed;
            if (!options.mask_path.empty())
                spec.mask = load_region_mask(options.mask_path,
                                             bundle.mesh.vertex_count());
            std::vector<HoleTrace> trace;
            const TexturedMesh partial = generate_partial(bundle.mesh, spec, &trace);
            r.output = output_dir / (stem + ".obj");
            save_mesh(partial, r.output);
            r.vertices_in = bundle.mesh.vertex_count();
            r.vertices_out = partial.vertex_count();
            r.holes_cut = int(trace.size());
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });

    ordered_json manifest;
    manifest["seed"] = options.seed;
    manifest["holes"] = options.holes;
    manifest["fraction"] = options.fraction;
    if (!options.mask_path.empty()) manifest["mask"] = options.mask_path.string();
    manifest["samples"] = ordered_json::array();

    int failures = 0;
    for (std::size_t i = 0; i < meshes.size(); ++i) {
        const auto& [stem, path] = meshes[i];
        const Result& r = results[i];
        ordered_json sample;
        sample["id"] = stem;
        sample["seed"] = r.seed;
        sample["input"] = path.filename().string();
        if (r.error.empty()) {
            // Filenames only: the manifest stays byte-identical when the same
            // dataset is regenerated under a different directory.
            sample["output"] = r.output.filename().string();
            sample["vertices_in"] = r.vertices_in;
            sample["vertices_out"] = r.vertices_out;
            sample["holes_cut"] = r.holes_cut;
            log << stem << ": " << r.vertices_in << " -> " << r.vertices_out
                << " vertices (" << r.holes_cut << " holes)\n";
        } else {
            sample["error"] = r.error;
            log << "error: " << stem << ": " << r.error << "\n";
            ++failures;
        }
        manifest["samples"].push_back(std::move(sample));
    }
    write_text_file(output_dir / "manifest.json", manifest.dump(2) + "\n");
    return failures == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// calibrate

namespace {

// Mean of the two directed mean shape distances between a variant and the
// reference surface.
double symmetric_shape_distance(const TexturedMesh& variant,
                                const SpatialIndex& variant_index,
                                const TexturedMesh& reference,
                                const SpatialIndex& reference_index, int samples,
                                std::uint64_t seed) {
    const DirectedMeasure xy = directed_measure(variant, reference_index, samples, seed);
    const DirectedMeasure yx =
        directed_measure(reference, variant_index, samples, seed + 1);
    return (xy.mean_shape_dist + yx.mean_shape_dist) / 2.0;
}

double symmetric_texture_distance(const TexturedMesh& variant,
                                  const SpatialIndex& variant_index,
                                  const TexturedMesh& reference,
                                  const SpatialIndex& reference_index, int samples,
                                  std::uint64_t seed) {
    const DirectedMeasure xy = directed_measure(variant, reference_index, samples, seed);
    const DirectedMeasure yx =
        directed_measure(reference, variant_index, samples, seed + 1);
    return (xy.mean_tex_dist + yx.mean_tex_dist) / 2.0;
}

}  // namespace

int run_calibrate(const fs::path& gt_dir, const fs::path& config_out,
                  const CalibrateOptions& options, std::ostream& log) {
    auto meshes = list_meshes(gt_dir);
    if (meshes.empty())
        throw std::runtime_error("no .obj meshes found in " + gt_dir.string());
    if (options.limit > 0 && int(meshes.size()) > options.limit)
        meshes.resize(options.limit);

    struct Row {
        std::string id;
        double d_identity = 0.0;
        double d_partial = 0.0;
        double d_filled = 0.0;
        double d_global = 0.0;
        double d_local = 0.0;
        double d_texture = -1.0;  // -1: mesh carries no texture
        std::string error;
    };
    std::vector<Row> rows(meshes.size());

    parallel_for(int(meshes.size()), options.jobs, [&](int i) {
        Row& row = rows[i];
        row.id = meshes[i].first;
        try {
            const MeshBundle bundle = load_mesh(meshes[i].second);
            const TexturedMesh& gt = bundle.mesh;
            const std::uint64_t seed = sample_seed(options.seed, row.id);

            Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
            Vec3 hi = -lo;
            for (const Vec3& v : gt.vertices) {
                lo = lo.cwiseMin(v);
                hi = hi.cwiseMax(v);
            }
            const double diagonal = (hi - lo).norm();
            const double shape_sigma = options.shape_noise > 0.0
                                           ? options.shape_noise
                                           : 0.005 * diagonal;
            const double local_radius = options.local_radius > 0.0
                                            ? options.local_radius
                                            : 0.05 * diagonal;

            const SpatialIndex gt_index = build_index(gt);
            const int n = options.samples;

            row.d_identity =
                directed_measure(gt, gt_index, n, seed).mean_shape_dist;

            HoleSpec hole_spec;
            hole_spec.holes = options.holes;
            hole_spec.fraction = options.fraction;
            hole_spec.seed = seed;
            const TexturedMesh partial = generate_partial(gt, hole_spec);
            const SpatialIndex partial_index = build_index(partial);
            row.d_partial = symmetric_shape_distance(partial, partial_index, gt,
                                                     gt_index, n, seed + 2);

            const TexturedMesh filled = fill_holes_baseline(partial);
            const SpatialIndex filled_index = build_index(filled);
            row.d_filled = symmetric_shape_distance(filled, filled_index, gt,
                                                    gt_index, n, seed + 4);

            const TexturedMesh global_noise =
                add_shape_noise(gt, shape_sigma, ShapeNoiseMode::global(), seed);
            const SpatialIndex global_index = build_index(global_noise);
            row.d_global = symmetric_shape_distance(global_noise, global_index, gt,
                                                    gt_index, n, seed + 6);

            const TexturedMesh local_noise = add_shape_noise(
                gt, shape_sigma,
                ShapeNoiseMode::local(local_radius, options.local_regions), seed);
            const SpatialIndex local_index = build_index(local_noise);
            row.d_local = symmetric_shape_distance(local_noise, local_index, gt,
                                                   gt_index, n, seed + 8);

            if (options.use_texture && gt.has_texture()) {
                TexturedMesh noisy = gt;
                noisy.texture = std::make_shared<const TextureImage>(
                    add_texture_noise(*gt.texture, options.texture_noise, seed));
                const SpatialIndex noisy_index = build_index(noisy);
                row.d_texture = symmetric_texture_distance(noisy, noisy_index, gt,
                                                           gt_index, n, seed + 10);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    std::vector<std::pair<double, double>> shape_pairs;
    std::vector<std::pair<double, double>> texture_pairs;
    int failures = 0;
    for (const Row& row : rows) {
        if (!row.error.empty()) {
            log << "error: " << row.id << ": " << row.error << "\n";
            ++failures;
            continue;
        }
        log << row.id << ": identity=" << fmt12(row.d_identity)
            << " partial=" << fmt12(row.d_partial)
            << " filled=" << fmt12(row.d_filled)
            << " global=" << fmt12(row.d_global)
            << " local=" << fmt12(row.d_local);
        if (row.d_texture >= 0.0) log << " texture=" << fmt12(row.d_texture);
        log << "\n";

        if (row.d_filled > 0.0)
            shape_pairs.emplace_back(row.d_filled, options.filled_target);
        else
            log << "warning: " << row.id
                << ": hole-filled baseline distance is zero, pair skipped\n";
        if (options.global_noise_target) {
            if (row.d_global > 0.0)
                shape_pairs.emplace_back(row.d_global, *options.global_noise_target);
            else
                log << "warning: " << row.id
                    << ": global-noise baseline distance is zero, pair skipped\n";
        }
        if (row.d_texture > 0.0)
            texture_pairs.emplace_back(row.d_texture, options.texture_noise_target);
    }

    if (failures == int(rows.size()))
        throw std::runtime_error("calibration failed on every mesh");
    if (shape_pairs.empty())
        throw std::runtime_error(
            "cannot calibrate from zero distances: every shape baseline matched "
            "the ground truth exactly");

    ScoreConfig config;
    config.sigma_shape = calibrate_sigma(shape_pairs);
    config.samples = options.samples;
    config.seed = options.seed;
    config.use_texture = options.use_texture;
    if (options.use_texture) {
        if (texture_pairs.empty())
            throw std::runtime_error(
                "no usable texture baseline (textured meshes required); rerun "
                "with texture evaluation disabled");
        config.sigma_texture = calibrate_sigma(texture_pairs);
    }

    save_score_config(config, config_out);
    log << "sigma_shape = " << fmt12(config.sigma_shape) << " (" << shape_pairs.size()
        << " pairs)\n";
    if (options.use_texture)
        log << "sigma_texture = " << fmt12(config.sigma_texture) << " ("
            << texture_pairs.size() << " pairs)\n";
    log << "wrote " << config_out.string() << "\n";
    return failures == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// eval

ScoreStats score_stats(const std::vector<double>& values) {
    ScoreStats stats;
    if (values.empty()) return stats;
    stats.mean = pairwise_sum(values.data(), values.size()) / double(values.size());
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - stats.mean;
        sq[i] = d * d;
    }
    stats.stddev =
        std::sqrt(pairwise_sum(sq.data(), sq.size()) / double(values.size()));
    return stats;
}

std::array<int, 50> histogram50(const std::vector<double>& values) {
    std::array<int, 50> bins{};
    for (double v : values) {
        const int bin = std::clamp(int(v * 50.0), 0, 49);
        ++bins[bin];
    }
    return bins;
}

std::vector<double> AggregateReport::shape_scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const SampleRow& row : rows) out.push_back(row.report.s_shape);
    return out;
}

std::vector<double> AggregateReport::texture_scores() const {
    if (!has_texture_scores()) return {};
    std::vector<double> out;
    out.reserve(rows.size());
    for (const SampleRow& row : rows) out.push_back(row.report.s_texture);
    return out;
}

std::vector<double> AggregateReport::overall_scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const SampleRow& row : rows) out.push_back(row.report.s_overall);
    return out;
}

bool AggregateReport::has_texture_scores() const { return config.use_texture; }

AggregateReport evaluate_batch(const std::vector<BatchEntry>& entries,
                               const EvalOptions& options, std::ostream& log) {
    options.config.validate();
    AggregateReport aggregate;
    aggregate.method = options.method;
    aggregate.config = options.config;
    aggregate.rows.resize(entries.size());
    std::vector<std::string> errors(entries.size());

    parallel_for(int(entries.size()), options.jobs, [&](int i) {
        const BatchEntry& entry = entries[i];
        SampleRow& row = aggregate.rows[i];
        row.id = entry.id;
        ScoreConfig config = options.config;
        config.seed = sample_seed(options.config.seed, entry.id);
        row.report.config = config;
        if (!config.use_texture)
            row.report.s_texture = std::numeric_limits<double>::quiet_NaN();

        if (entry.recon_path.empty()) {
            row.report.flags.push_back("missing_recon");
            return;
        }
        try {
            const MeshBundle gt = load_mesh(entry.gt_path);
            const MeshBundle recon = load_mesh(entry.recon_path);
            row.report = score_pair(gt.mesh, recon.mesh, config);
        } catch (const std::exception& e) {
            errors[i] = e.what();
            ScoreReport zero;
            zero.config = config;
            if (!config.use_texture)
                zero.s_texture = std::numeric_limits<double>::quiet_NaN();
            zero.flags.push_back("load_failed");
            row.report = std::move(zero);
        }
    });

    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!errors[i].empty())
            log << "error: " << entries[i].id << ": " << errors[i] << "\n";
        else if (aggregate.rows[i].report.flagged("missing_recon"))
            log << "error: " << entries[i].id << ": no reconstruction found\n";
    }
    return aggregate;
}

void write_sample_csv(const AggregateReport& report, const fs::path& path) {
    std::string out =
        "id,s_area,s_shape,s_texture,s_overall,hit_xy,hit_yx,"
        "d_shape_xy,d_shape_yx,d_tex_xy,d_tex_yx,flags\n";
    for (const SampleRow& row : report.rows) {
        const ScoreReport& r = row.report;
        out += csv_field(row.id);
        for (double v : {r.s_area, r.s_shape, r.s_texture, r.s_overall,
                         r.recon_to_gt.hit_rate, r.gt_to_recon.hit_rate,
                         r.recon_to_gt.mean_shape_dist, r.gt_to_recon.mean_shape_dist,
                         r.recon_to_gt.mean_tex_dist, r.gt_to_recon.mean_tex_dist}) {
            out += ',';
            out += fmt12(v);
        }
        out += ',';
        out += csv_field(join_flags(r.flags));
        out += '\n';
    }
    write_text_file(path, out);
}

namespace {

ordered_json stats_json(const ScoreStats& stats) {
    ordered_json j;
    j["mean_percent"] = stats.mean * 100.0;
    j["std_percent"] = stats.stddev * 100.0;
    return j;
}

ordered_json histogram_json(const std::array<int, 50>& bins) {
    return ordered_json(std::vector<int>(bins.begin(), bins.end()));
}

}  // namespace

void write_aggregate_json(const AggregateReport& report, const fs::path& path) {
    const bool textured = report.has_texture_scores();
    const std::vector<double> shape = report.shape_scores();
    const std::vector<double> texture = report.texture_scores();
    const std::vector<double> overall = report.overall_scores();

    ordered_json j;
    j["method"] = report.method;
    j["n_samples"] = report.rows.size();
    j["scores"]["shape"] = stats_json(score_stats(shape));
    j["scores"]["texture"] =
        textured ? stats_json(score_stats(texture)) : ordered_json(nullptr);
    j["scores"]["overall"] = stats_json(score_stats(overall));
    j["histogram"]["bins"] = 50;
    j["histogram"]["range"] = {0.0, 1.0};
    j["histogram"]["shape"] = histogram_json(histogram50(shape));
    j["histogram"]["texture"] =
        textured ? histogram_json(histogram50(texture)) : ordered_json(nullptr);
    j["histogram"]["overall"] = histogram_json(histogram50(overall));
    if (textured) {
        auto pairs = ordered_json::array();
        for (const SampleRow& row : report.rows)
            pairs.push_back({row.report.s_shape, row.report.s_texture});
        j["correlation"] = std::move(pairs);
    } else {
        j["correlation"] = nullptr;
    }

    auto samples = ordered_json::array();
    for (const SampleRow& row : report.rows) {
        const ScoreReport& r = row.report;
        ordered_json s;
        s["id"] = row.id;
        s["s_area"] = r.s_area;
        s["s_shape"] = r.s_shape;
        s["s_texture"] = textured ? ordered_json(r.s_texture) : ordered_json(nullptr);
        s["s_overall"] = r.s_overall;
        s["hit_xy"] = r.recon_to_gt.hit_rate;
        s["hit_yx"] = r.gt_to_recon.hit_rate;
        s["d_shape_xy"] = r.recon_to_gt.mean_shape_dist;
        s["d_shape_yx"] = r.gt_to_recon.mean_shape_dist;
        s["d_tex_xy"] = r.recon_to_gt.mean_tex_dist;
        s["d_tex_yx"] = r.gt_to_recon.mean_tex_dist;
        s["flags"] = r.flags;
        samples.push_back(std::move(s));
    }
    j["samples"] = std::move(samples);
    j["config"] = config_json(report.config);

    write_text_file(path, j.dump(2) + "\n");
}

int run_eval(const fs::path& gt_dir, const fs::path& recon_dir,
             const fs::path& out_base, const EvalOptions& options, std::ostream& log) {
    const std::vector<BatchEntry> entries = match_stems(gt_dir, recon_dir);
    if (entries.empty())
        throw std::runtime_error("no .obj meshes found in " + gt_dir.string());
    const auto recon_meshes = list_meshes(recon_dir);
    for (const auto& [stem, path] : recon_meshes)
        if (std::none_of(entries.begin(), entries.end(),
                         [&](const BatchEntry& e) { return e.id == stem; }))
            log << "warning: " << path.string() << " has no ground-truth counterpart\n";

    EvalOptions opts = options;
    if (opts.method.empty()) opts.method = dir_label(recon_dir);

    const AggregateReport aggregate = evaluate_batch(entries, opts, log);
    fs::path csv_path = out_base;
    csv_path += ".csv";
    fs::path json_path = out_base;
    json_path += ".json";
    write_sample_csv(aggregate, csv_path);
    write_aggregate_json(aggregate, json_path);

    const ScoreStats shape = score_stats(aggregate.shape_scores());
    const ScoreStats overall = score_stats(aggregate.overall_scores());
    char line[160];
    std::snprintf(line, sizeof line, "%s: shape %.2f +/- %.2f%%", opts.method.c_str(),
                  shape.mean * 100.0, shape.stddev * 100.0);
    log << line;
    if (aggregate.has_texture_scores()) {
        const ScoreStats texture = score_stats(aggregate.texture_scores());
        std::snprintf(line, sizeof line, ", texture %.2f +/- %.2f%%",
                      texture.mean * 100.0, texture.stddev * 100.0);
        log << line;
    }
    std::snprintf(line, sizeof line, ", overall %.2f +/- %.2f%% (%zu samples)\n",
                  overall.mean * 100.0, overall.stddev * 100.0, aggregate.rows.size());
    log << line;

    int flagged = 0;
    for (const SampleRow& row : aggregate.rows)
        if (!row.report.flags.empty()) ++flagged;
    if (flagged > 0) log << flagged << " sample(s) flagged\n";
    return flagged == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// report

namespace {

struct MethodSummary {
    std::string method;
    std::size_t n_samples = 0;
    double shape_mean = 0.0, shape_std = 0.0;
    bool has_texture = false;
    double texture_mean = 0.0, texture_std = 0.0;
    double overall_mean = 0.0, overall_std = 0.0;
    nlohmann::json histogram;
    nlohmann::json correlation;
    nlohmann::json config;
};

MethodSummary load_summary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open aggregate: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        MethodSummary s;
        s.method = j.at("method").get<std::string>();
        s.n_samples = j.at("n_samples").get<std::size_t>();
        const auto& scores = j.at("scores");
        s.shape_mean = scores.at("shape").at("mean_percent").get<double>();
        s.shape_std = scores.at("shape").at("std_percent").get<double>();
        if (!scores.at("texture").is_null()) {
            s.has_texture = true;
            s.texture_mean = scores.at("texture").at("mean_percent").get<double>();
            s.texture_std = scores.at("texture").at("std_percent").get<double>();
        }
        s.overall_mean = scores.at("overall").at("mean_percent").get<double>();
        s.overall_std = scores.at("overall").at("std_percent").get<double>();
        s.histogram = j.at("histogram");
        s.correlation = j.at("correlation");
        s.config = j.at("config");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
                   ? c
                   : '_';
    return out.empty() ? std::string("method") : out;
}

std::string score_cell(double mean, double std) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%6.2f +/- %5.2f", mean, std);
    return buf;
}

}  // namespace

int run_report(const std::vector<fs::path>& aggregate_paths, const fs::path& plot_dir,
               std::ostream& table_out, std::ostream& log) {
    if (aggregate_paths.empty())
        throw std::runtime_error("report needs at least one aggregate file");

    std::vector<MethodSummary> methods;
    methods.reserve(aggregate_paths.size());
    for (const fs::path& path : aggregate_paths)
        methods.push_back(load_summary(path));

    // Configs must agree for scores to be comparable; mismatches against the
    // first aggregate are annotated rather than rejected.
    const nlohmann::json& reference_config = methods.front().config;
    std::vector<bool> mismatched(methods.size(), false);
    for (std::size_t i = 1; i < methods.size(); ++i)
        if (methods[i].config != reference_config) {
            mismatched[i] = true;
            log << "warning: " << aggregate_paths[i].string()
                << " was produced with a different config; scores are not "
                   "directly comparable\n";
        }

    std::vector<std::size_t> order(methods.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (methods[a].overall_mean != methods[b].overall_mean)
            return methods[a].overall_mean > methods[b].overall_mean;
        return methods[a].method < methods[b].method;
    });

    std::size_t name_width = 6;
    for (const MethodSummary& m : methods)
        name_width = std::max(name_width, m.method.size() + 2);

    const std::string sep(name_width + 3 * 18 + 10, '-');
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s %17s %17s %17s %9s\n", int(name_width),
                  "method", "shape %", "texture %", "overall %", "samples");
    table_out << buf << sep << "\n";
    bool any_mismatch = false;
    for (std::size_t idx : order) {
        const MethodSummary& m = methods[idx];
        std::string name = m.method;
        if (mismatched[idx]) {
            name += " *";
            any_mismatch = true;
        }
        std::snprintf(buf, sizeof buf, "%-*s %17s %17s %17s %9zu\n", int(name_width),
                      name.c_str(), score_cell(m.shape_mean, m.shape_std).c_str(),
                      m.has_texture ? score_cell(m.texture_mean, m.texture_std).c_str()
                                    : "-",
                      score_cell(m.overall_mean, m.overall_std).c_str(), m.n_samples);
        table_out << buf;
    }
    if (any_mismatch)
        table_out << "* evaluated with a different config than the first aggregate\n";

    if (!plot_dir.empty()) {
        fs::create_directories(plot_dir);
        for (const MethodSummary& m : methods) {
            const std::string stem = sanitize_name(m.method);

            std::string hist = m.has_texture ? "bin_lo,bin_hi,shape,texture,overall\n"
                                             : "bin_lo,bin_hi,shape,overall\n";
            const auto& shape_bins = m.histogram.at("shape");
            const auto& overall_bins = m.histogram.at("overall");
            for (int b = 0; b < 50; ++b) {
                hist += fmt12(b / 50.0);
                hist += ',';
                hist += fmt12((b + 1) / 50.0);
                hist += ',';
                hist += std::to_string(shape_bins.at(b).get<int>());
                if (m.has_texture) {
                    hist += ',';
                    hist += std::to_string(m.histogram.at("texture").at(b).get<int>());
                }
                hist += ',';
                hist += std::to_string(overall_bins.at(b).get<int>());
                hist += '\n';
            }
            write_text_file(plot_dir / (stem + "_histogram.csv"), hist);

            if (m.has_texture && m.correlation.is_array()) {
                std::string corr = "s_shape,s_texture\n";
                for (const auto& pair : m.correlation) {
                    corr += fmt12(pair.at(0).get<double>());
                    corr += ',';
                    corr += fmt12(pair.at(1).get<double>());
                    corr += '\n';
                }
                write_text_file(plot_dir / (stem + "_correlation.csv"), corr);
            }
        }
        log << "wrote plot data for " << methods.size() << " method(s) to "
            << plot_dir.string() << "\n";
    }
    return 0;
}

}  // namespace mcbench
