#include "mcbench/batch.hpp"
#include "mcbench/scoring.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{
        "Benchmark toolkit for textured 3D mesh completion: cuts synthetic "
        "partial scans, calibrates the scoring parameters and scores "
        "reconstructions against ground truth."};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand(
        "gen-partial", "Cut synthetic partial scans from complete meshes");
    std::string gen_in, gen_out;
    mcbench::GenPartialOptions gen_opts;
    std::string gen_mask;
    gen->add_option("input", gen_in, "Directory with complete .obj meshes")
        ->required();
    gen->add_option("output", gen_out, "Output directory")->required();
    gen->add_option("--holes", gen_opts.holes, "Number of holes to cut")
        ->capture_default_str();
    gen->add_option("--fraction", gen_opts.fraction,
                    "Vertices removed per hole, as a fraction of the original count")
        ->capture_default_str();
    gen->add_option("--seed", gen_opts.seed, "Base seed")->capture_default_str();
    gen->add_option("--mask", gen_mask,
                    "File listing eligible vertex indices, one per line");
    gen->add_option("--jobs", gen_opts.jobs, "Worker threads")->capture_default_str();

    auto* cal = app.add_subcommand(
        "calibrate", "Fit the sigma parameters from baselines on ground-truth meshes");
    std::string cal_gt, cal_out = "score_config.txt";
    mcbench::CalibrateOptions cal_opts;
    bool cal_no_texture = false;
    double cal_global_target = 0.0;
    cal->add_option("ground_truth", cal_gt, "Directory with ground-truth .obj meshes")
        ->required();
    cal->add_option("--config", cal_out, "Output config file")->capture_default_str();
    cal->add_option("--limit", cal_opts.limit, "Use only the first N meshes (0 = all)")
        ->capture_default_str();
    cal->add_option("--holes", cal_opts.holes, "Holes per partial baseline")
        ->capture_default_str();
    cal->add_option("--fraction", cal_opts.fraction, "Vertices removed per hole")
        ->capture_default_str();
    cal->add_option("--shape-noise", cal_opts.shape_noise,
                    "Shape noise sigma (0 = 0.5% of the bounding-box diagonal)")
        ->capture_default_str();
    cal->add_option("--local-radius", cal_opts.local_radius,
                    "Local noise region radius (0 = 5% of the bounding-box diagonal)")
        ->capture_default_str();
    cal->add_option("--local-regions", cal_opts.local_regions,
                    "Number of local noise regions")
        ->capture_default_str();
    cal->add_option("--texture-noise", cal_opts.texture_noise,
                    "Per-channel texture noise sigma")
        ->capture_default_str();
    cal->add_option("--filled-target", cal_opts.filled_target,
                    "Target score for the hole-filled baseline")
        ->capture_default_str();
    cal->add_option("--texture-noise-target", cal_opts.texture_noise_target,
                    "Target score for the texture-noise baseline")
        ->capture_default_str();
    auto* cal_gt_opt = cal->add_option(
        "--global-noise-target", cal_global_target,
        "Also fit sigma_shape against the global-noise baseline at this target");
    cal->add_option("--samples", cal_opts.samples, "Surface samples per measurement")
        ->capture_default_str();
    cal->add_option("--seed", cal_opts.seed, "Base seed")->capture_default_str();
    cal->add_flag("--no-texture", cal_no_texture, "Skip texture calibration");
    cal->add_option("--jobs", cal_opts.jobs, "Worker threads")->capture_default_str();

    auto* ev = app.add_subcommand("eval", "Score reconstructions against ground truth");
    std::string ev_gt, ev_recon, ev_config, ev_out = "scores";
    mcbench::EvalOptions ev_opts;
    bool ev_no_texture = false;
    int ev_samples = 0;
    std::uint64_t ev_seed = 0;
    ev->add_option("ground_truth", ev_gt, "Directory with ground-truth .obj meshes")
        ->required();
    ev->add_option("reconstructions", ev_recon,
                   "Directory with reconstructed .obj meshes (matched by stem)")
        ->required();
    ev->add_option("--config", ev_config, "Score config file from `calibrate`")
        ->required();
    ev->add_option("--out", ev_out, "Output base path (writes <out>.csv and <out>.json)")
        ->capture_default_str();
    ev->add_option("--method", ev_opts.method,
                   "Method label (defaults to the reconstruction directory name)");
    ev->add_option("--samples", ev_samples, "Override the config sample count (0 = keep)");
    auto* ev_seed_opt = ev->add_option("--seed", ev_seed, "Override the config seed");
    ev->add_flag("--no-texture", ev_no_texture, "Shape-only scoring");
    ev->add_option("--jobs", ev_opts.jobs, "Worker threads")->capture_default_str();

    auto* rep = app.add_subcommand("report", "Compare aggregate score files side by side");
    std::vector<std::string> rep_paths;
    std::string rep_plot;
    rep->add_option("aggregates", rep_paths, "Aggregate .json files from `eval`")
        ->required();
    rep->add_option("--plot-dir", rep_plot,
                    "Directory for histogram/correlation CSV data");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            gen_opts.mask_path = gen_mask;
            return mcbench::run_gen_partial(gen_in, gen_out, gen_opts, std::cerr);
        }
        if (cal->parsed()) {
            cal_opts.use_texture = !cal_no_texture;
            if (cal_gt_opt->count() > 0) cal_opts.global_noise_target = cal_global_target;
            return mcbench::run_calibrate(cal_gt, cal_out, cal_opts, std::cerr);
        }
        if (ev->parsed()) {
            ev_opts.config = mcbench::load_score_config(ev_config);
            if (ev_samples > 0) ev_opts.config.samples = ev_samples;
            if (ev_seed_opt->count() > 0) ev_opts.config.seed = ev_seed;
            if (ev_no_texture) ev_opts.config.use_texture = false;
            return mcbench::run_eval(ev_gt, ev_recon, ev_out, ev_opts, std::cerr);
        }
        if (rep->parsed()) {
            std::vector<fs::path> paths(rep_paths.begin(), rep_paths.end());
            return mcbench::run_report(paths, rep_plot, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
