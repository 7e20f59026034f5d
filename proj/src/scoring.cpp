#include "mcbench/scoring.hpp"

#include "mcbench/closest_point.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mcbench {

namespace {

[[noreturn]] void config_error(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void ScoreConfig::validate() const {
    if (!(sigma_shape > 0.0))
        throw std::invalid_argument("sigma_shape must be positive");
    if (use_texture && !(sigma_texture > 0.0))
        throw std::invalid_argument("sigma_texture must be positive");
    if (samples <= 0) throw std::invalid_argument("samples must be positive");
}

ScoreConfig load_score_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    ScoreConfig config;
    bool saw_sigma_shape = false;
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = trim_copy(line);
        if (entry.empty() || entry.front() == '#') continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            config_error(path, "expected key=value, got '" + entry + "'");
        const std::string key = trim_copy(entry.substr(0, eq));
        const std::string value = trim_copy(entry.substr(eq + 1));
        if (key == "sigma_shape" || key == "sigma_texture") {
            double v = 0.0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || p != value.data() + value.size())
                config_error(path, "malformed number for " + key);
            (key == "sigma_shape" ? config.sigma_shape : config.sigma_texture) = v;
            if (key == "sigma_shape") saw_sigma_shape = true;
        } else if (key == "samples") {
            config.samples = std::stoi(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "texture") {
            if (value == "on")
                config.use_texture = true;
            else if (value == "off")
                config.use_texture = false;
            else
                config_error(path, "texture must be 'on' or 'off'");
        } else {
            config_error(path, "unknown key '" + key + "'");
        }
    }
    if (!saw_sigma_shape) config_error(path, "missing sigma_shape");
    config.validate();
    return config;
}

void save_score_config(const ScoreConfig& config, const std::filesystem::path& path) {
    config.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create config: " + path.string());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", config.sigma_shape);
    out << "sigma_shape = " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.17g", config.sigma_texture);
    out << "sigma_texture = " << buf << "\n";
    out << "samples = " << config.samples << "\n";
    out << "seed = " << config.seed << "\n";
    out << "texture = " << (config.use_texture ? "on" : "off") << "\n";
    if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

bool ScoreReport::flagged(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

double phi(double d, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("phi needs a positive sigma");
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

double area_score(double area_x, double area_y) {
    if (!(area_x + area_y > 0.0))
        throw std::invalid_argument("area score undefined for two empty surfaces");
    const double ax = area_x / (area_x + area_y);
    const double ay = area_y / (area_x + area_y);
    return 1.0 - std::abs(ax - ay);
}

double shape_score(const DirectedMeasure& xy, const DirectedMeasure& yx,
                   double sigma_s) {
    return (xy.hit_rate * phi(xy.mean_shape_dist, sigma_s) +
            yx.hit_rate * phi(yx.mean_shape_dist, sigma_s)) /
           2.0;
}

double texture_score(const DirectedMeasure& xy, const DirectedMeasure& yx,
                     double sigma_t) {
    return (xy.hit_rate * phi(xy.mean_tex_dist, sigma_t) +
            yx.hit_rate * phi(yx.mean_tex_dist, sigma_t)) /
           2.0;
}

namespace {

void require_unit_range(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

double overall_score(double s_area, double s_shape, double s_texture) {
    require_unit_range(s_area, "area score");
    require_unit_range(s_shape, "shape score");
    require_unit_range(s_texture, "texture score");
    return s_area * (s_shape + s_texture) / 2.0;
}

double overall_score_shape_only(double s_area, double s_shape) {
    require_unit_range(s_area, "area score");
    require_unit_range(s_shape, "shape score");
    return s_area * s_shape;
}

ScoreReport score_pair(const TexturedMesh& gt, const TexturedMesh& recon,
                       const ScoreConfig& config) {
    config.validate();
    ScoreReport report;
    report.config = config;
    report.area_recon = mesh_surface_area(recon);
    report.area_gt = mesh_surface_area(gt);
    if (!config.use_texture) report.s_texture = std::numeric_limits<double>::quiet_NaN();

    if (!(report.area_recon > 0.0)) report.flags.push_back("zero_area_recon");
    if (!(report.area_gt > 0.0)) report.flags.push_back("zero_area_gt");
    if (!report.flags.empty()) return report;  // all scores stay 0

    if (config.use_texture && (!gt.has_texture() || !recon.has_texture()))
        report.flags.push_back("texture_degenerate");

    const SpatialIndex gt_index = build_index(gt);
    const SpatialIndex recon_index = build_index(recon);
    report.recon_to_gt =
        directed_measure(recon, gt_index, config.samples, config.seed);
    report.gt_to_recon =
        directed_measure(gt, recon_index, config.samples, config.seed + 1);

    report.s_area = area_score(report.area_recon, report.area_gt);
    report.s_shape =
        shape_score(report.recon_to_gt, report.gt_to_recon, config.sigma_shape);
    if (config.use_texture) {
        report.s_texture =
            texture_score(report.recon_to_gt, report.gt_to_recon, config.sigma_texture);
        report.s_overall = overall_score(report.s_area, report.s_shape, report.s_texture);
    } else {
        report.s_overall = overall_score_shape_only(report.s_area, report.s_shape);
    }
    return report;
}

double calibrate_sigma(const std::vector<std::pair<double, double>>& reference) {
    if (reference.empty())
        throw std::invalid_argument("calibration needs at least one reference pair");
    for (const auto& [d, s] : reference) {
        if (!(d > 0.0))
            throw std::invalid_argument("calibration distances must be positive");
        if (!(s > 0.0) || !(s < 1.0))
            throw std::invalid_argument(
                "calibration targets must lie strictly inside (0, 1)");
    }

    const auto exact = [](double d, double s) { return d / std::sqrt(-2.0 * std::log(s)); };
    if (reference.size() == 1)
        return exact(reference[0].first, reference[0].second);

    // Least-squares over sigma. Each pair alone pins an exact sigma, and the
    // loss is unimodal between the smallest and largest of those, so a
    // golden-section search converges deterministically.
    double lo = exact(reference[0].first, reference[0].second);
    double hi = lo;
    for (const auto& [d, s] : reference) {
        lo = std::min(lo, exact(d, s));
        hi = std::max(hi, exact(d, s));
    }
    if (hi - lo == 0.0) return lo;

    const auto loss = [&](double sigma) {
        double total = 0.0;
        for (const auto& [d, s] : reference) {
            const double err = phi(d, sigma) - s;
            total += err * err;
        }
        return total;
    };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = loss(c), fd = loss(d);
    for (int iter = 0; iter < 200 && b - a > 1e-14 * hi; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = loss(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = loss(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace mcbench
