#include "optomech/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "optomech/band.hpp"
#include "optomech/conditional.hpp"
#include "optomech/errors.hpp"
#include "optomech/format.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/params.hpp"
#include "optomech/spectra.hpp"

namespace optomech::cli {

namespace {

constexpr const char* kConfigEnv = "EPR_OPTOMECH_CONFIG";

struct Options {
    std::string config_path;
    std::string out_path = "-";
    double f_min = 1.0;
    double f_max = 1e4;
    int points_per_decade = 50;
    std::string format;
    unsigned threads = 1;
    std::optional<double> r;
    std::optional<double> r2;
    double readout_common = 0.0;
    double readout_differential = 0.0;
};

InterferometerConfig resolve_config(const Options& opt) {
    if (!opt.config_path.empty()) return load_config_file(opt.config_path);
    if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return load_config_file(env);
    return InterferometerConfig{};
}

void emit(const Options& opt, const std::string& data, std::ostream& out) {
    if (opt.out_path == "-") {
        out << data;
        return;
    }
    std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("out", "cannot write output file '" + opt.out_path + "'");
    file << data;
}

std::string require_format(const Options& opt, const std::string& fallback, bool csv_allowed) {
    const std::string fmt = opt.format.empty() ? fallback : opt.format;
    if (fmt == "csv" && !csv_allowed) throw ConfigError("format", "this subcommand only emits json");
    return fmt;
}

std::string cmd_budget(const Options& opt, const InterferometerConfig& cfg) {
    if (!(opt.f_min > 0.0) || !(opt.f_max > opt.f_min)) throw ConfigError("fmin", "grid needs 0 < fmin < fmax");
    if (opt.points_per_decade < 1) throw ConfigError("ppd", "ppd must be at least 1");
    const auto curves = spectra::budget(cfg, opt.f_min, opt.f_max, opt.points_per_decade, opt.threads);
    std::ostringstream s;
    if (require_format(opt, "csv", true) == "csv") {
        spectra::write_csv(s, curves);
        return s.str();
    }
    nlohmann::json doc;
    nlohmann::json freqs = nlohmann::json::array();
    for (double f : curves.front().frequencies) freqs.push_back(sig9(f));
    doc["frequency_hz"] = freqs;
    for (const auto& c : curves) {
        nlohmann::json values = nlohmann::json::array();
        for (double v : c.values) values.push_back(sig9(v));
        doc["curves"][std::string(spectra::label_name(c.label)) + "_psd_m2_per_hz"] = values;
    }
    return doc.dump(2) + "\n";
}

std::string cmd_band(const Options& opt, const InterferometerConfig& cfg) {
    require_format(opt, "json", false);
    return band::to_json(band::analyze(cfg)).dump(2) + "\n";
}

std::string cmd_entangle(const Options& opt, const InterferometerConfig& cfg) {
    using namespace conditional;
    require_format(opt, "json", false);
    const auto common_model = build_model(cfg, MirrorMode::Common, opt.readout_common);
    const auto diff_model = build_model(cfg, MirrorMode::Differential, opt.readout_differential);
    const auto common = steady_conditional_cov(common_model);
    const auto diff = steady_conditional_cov(diff_model);
    const auto mirrors = two_mirror_state(common, diff);

    nlohmann::json doc;
    doc["common"] = {{"model", to_json(common_model)}, {"conditional_state", to_json(common)}};
    doc["differential"] = {{"model", to_json(diff_model)}, {"conditional_state", to_json(diff)}};
    doc["mirrors"] = gaussian::to_json(mirrors.state);
    doc["epr"] = gaussian::to_json(mirrors.epr);
    return doc.dump(2) + "\n";
}

std::string cmd_fig1(const Options& opt, const InterferometerConfig& cfg) {
    require_format(opt, "json", false);
    const double r = opt.r.value_or(cfg.squeeze_parameter_r);
    if (!(r >= 0.0)) throw ConfigError("r", "r must be non-negative");
    const auto state = gaussian::epr_pair(r, r);
    nlohmann::json doc;
    doc["r"] = sig9(r);
    doc["state"] = gaussian::to_json(state);
    doc["epr"] = gaussian::to_json(gaussian::epr_report(state, 0, 1));
    return doc.dump(2) + "\n";
}

std::string cmd_swap(const Options& opt, const InterferometerConfig& cfg) {
    require_format(opt, "json", false);
    const double r1 = opt.r.value_or(cfg.squeeze_parameter_r);
    const double r2 = opt.r2.value_or(r1);
    if (!(r1 >= 0.0) || !(r2 >= 0.0)) throw ConfigError("r", "r must be non-negative");
    nlohmann::json doc;
    doc["r_pair1"] = sig9(r1);
    doc["r_pair2"] = sig9(r2);
    doc["epr"] = gaussian::to_json(gaussian::entanglement_swap(r1, r2));
    return doc.dump(2) + "\n";
}

std::string one_line(std::string s) {
    for (char& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Noise budget and conditional-entanglement calculator for a dual-Michelson mirror setup"};
    app.require_subcommand(1, 1);

    Options opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON config file (falls back to $EPR_OPTOMECH_CONFIG)");
        sub->add_option("--out", opt.out_path, "output path, '-' for stdout");
        sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* budget = app.add_subcommand("budget", "noise spectral densities on a log grid");
    add_common(budget);
    budget->add_option("--fmin", opt.f_min, "lowest frequency [Hz]");
    budget->add_option("--fmax", opt.f_max, "highest frequency [Hz]");
    budget->add_option("--ppd", opt.points_per_decade, "grid points per decade");
    budget->add_option("--threads", opt.threads, "worker threads for grid evaluation");

    auto* band = app.add_subcommand("band", "SQL crossings, timescales and feasibility");
    add_common(band);

    auto* entangle = app.add_subcommand("entangle", "conditional common/differential states and mirror entanglement");
    add_common(entangle);
    entangle->add_option("--readout-common", opt.readout_common, "common-mode readout angle [rad]");
    entangle->add_option("--readout-diff", opt.readout_differential, "differential-mode readout angle [rad]");

    auto* fig1 = app.add_subcommand("fig1", "EPR pair from two squeezed vacua");
    add_common(fig1);
    fig1->add_option("--r", opt.r, "squeeze parameter (default: config squeeze_parameter_r)");

    auto* swap = app.add_subcommand("swap", "entanglement swapping between two EPR pairs");
    add_common(swap);
    swap->add_option("--r", opt.r, "squeeze parameter of the first pair");
    swap->add_option("--r2", opt.r2, "squeeze parameter of the second pair (default: --r)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return kConfigError;
    }

    try {
        const InterferometerConfig cfg = resolve_config(opt);
        std::string data;
        if (budget->parsed()) data = cmd_budget(opt, cfg);
        if (band->parsed()) data = cmd_band(opt, cfg);
        if (entangle->parsed()) data = cmd_entangle(opt, cfg);
        if (fig1->parsed()) data = cmd_fig1(opt, cfg);
        if (swap->parsed()) data = cmd_swap(opt, cfg);
        emit(opt, data, out);
    } catch (const ConfigError& e) {
        err << "error: config: " << one_line(e.what()) << '\n';
        return kConfigError;
    } catch (const NumericError& e) {
        err << "error: numeric: " << one_line(e.what()) << '\n';
        return kNumericError;
    } catch (const std::exception& e) {
        err << "error: numeric: " << one_line(e.what()) << '\n';
        return kNumericError;
    }
    return kOk;
}

}  // namespace optomech::cli
