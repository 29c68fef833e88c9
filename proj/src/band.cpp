#include "optomech/band.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "optomech/format.hpp"

namespace optomech::band {

namespace {

using spectra::CurveLabel;
using spectra::SpectralModel;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// A sign-change event is either an exact zero at a grid point or an interval
// between consecutive grid points whose signs differ.
struct Event {
    double lo;
    double hi;
};

std::vector<Event> scan_events(const std::vector<double>& freqs, const std::vector<double>& diff) {
    std::vector<Event> events;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const int s = sign_of(diff[i]);
        if (s == 0) {
            events.push_back({freqs[i], freqs[i]});
            continue;
        }
        if (i > 0) {
            const int prev = sign_of(diff[i - 1]);
            if (prev != 0 && prev != s) events.push_back({freqs[i - 1], freqs[i]});
        }
    }
    return events;
}

double bisect(const SpectralModel& a, const SpectralModel& b, double lo, double hi, double rel_tol) {
    auto g = [&](double f) { return a.psd(f) - b.psd(f); };
    const int s_lo = sign_of(g(lo));
    if (s_lo == 0) return lo;
    if (sign_of(g(hi)) == 0) return hi;
    // Bisect in log f; 200 halvings exhausts double precision for any bracket.
    for (int iter = 0; iter < 200 && hi / lo - 1.0 > rel_tol; ++iter) {
        const double mid = std::sqrt(lo * hi);
        const int s = sign_of(g(mid));
        if (s == 0) return mid;
        if (s == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

double resolve(const std::vector<Event>& events, const SpectralModel& a, const SpectralModel& b, double rel_tol) {
    const std::string what = std::string(spectra::label_name(a.label)) + " vs " + std::string(spectra::label_name(b.label));
    if (events.empty()) throw CrossingError(CrossingError::Kind::NoCrossing, "no crossing: " + what);
    if (events.size() > 1) throw CrossingError(CrossingError::Kind::Ambiguous, "ambiguous bracket: " + what);
    const Event& e = events.front();
    if (e.lo == e.hi) return e.lo;
    return bisect(a, b, e.lo, e.hi, rel_tol);
}

std::optional<double> try_crossing(const SpectralModel& a, const SpectralModel& b, Bracket bracket,
                                   const CrossingOptions& options) {
    try {
        return find_crossing(a, b, bracket, options);
    } catch (const CrossingError&) {
        return std::nullopt;
    }
}

}  // namespace

double find_crossing(const SpectralModel& a, const SpectralModel& b, Bracket bracket, CrossingOptions options) {
    const auto freqs = spectra::log_grid(bracket.lo, bracket.hi, options.scan_points_per_decade);
    std::vector<double> diff(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) diff[i] = a.psd(freqs[i]) - b.psd(freqs[i]);
    return resolve(scan_events(freqs, diff), a, b, options.rel_tol);
}

double find_crossing(const spectra::SpectralCurve& a, const spectra::SpectralCurve& b, Bracket bracket,
                     const InterferometerConfig& cfg, double rel_tol) {
    if (a.frequencies != b.frequencies || a.values.size() != a.frequencies.size() ||
        b.values.size() != b.frequencies.size()) {
        throw std::invalid_argument("find_crossing: curves must share one grid");
    }
    std::vector<double> freqs;
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.frequencies.size(); ++i) {
        const double f = a.frequencies[i];
        if (f < bracket.lo || f > bracket.hi) continue;
        freqs.push_back(f);
        diff.push_back(a.values[i] - b.values[i]);
    }
    return resolve(scan_events(freqs, diff), spectra::model(cfg, a.label), spectra::model(cfg, b.label), rel_tol);
}

BandReport analyze(const InterferometerConfig& cfg, AnalyzeOptions options) {
    validate(cfg);
    const auto d = derive(cfg);
    const Bracket above_resonance{d.pendulum_omega0 / (2.0 * std::numbers::pi), options.f_upper};

    const auto sql = spectra::model(cfg, CurveLabel::OscillatorSql);
    const auto backaction = spectra::model(cfg, CurveLabel::BackAction);
    const auto force = spectra::model(cfg, CurveLabel::ForceClassical);
    const auto sensing = spectra::model(cfg, CurveLabel::Sensing);

    BandReport r;
    r.f_force_cross = try_crossing(force, sql, above_resonance, options.crossing);
    r.f_sensing_cross = try_crossing(sensing, sql, above_resonance, options.crossing);
    r.f_backaction_cross = try_crossing(backaction, sql, above_resonance, options.crossing);
    if (cfg.circulating_power_P > 0.0) {
        const auto shot = spectra::model(cfg, CurveLabel::Shot);
        r.f_shot_cross = try_crossing(shot, sql, above_resonance, options.crossing);
        // total_quantum / hoSQL is minimal (and equal to 1) exactly where shot = back-action.
        r.f_sql_touch = try_crossing(shot, backaction, above_resonance, options.crossing);
    }

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    if (r.f_force_cross) r.tau_F = 1.0 / (kTwoPi * *r.f_force_cross);
    if (r.f_backaction_cross) r.tau_q = 1.0 / (kTwoPi * *r.f_backaction_cross);
    if (r.tau_F && r.tau_q) r.tau_V_bounds = std::make_pair(*r.tau_q, *r.tau_F);
    if (r.f_force_cross && r.f_sensing_cross) r.ratio = *r.f_sensing_cross / *r.f_force_cross;

    r.feasible = r.ratio && r.tau_V_bounds && *r.ratio > kFeasibilityRatio &&
                 *r.f_force_cross < *r.f_sensing_cross && r.tau_V_bounds->first < r.tau_V_bounds->second;
    return r;
}

nlohmann::json to_json(const BandReport& report) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        return v ? nlohmann::json(sig9(*v)) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["f_force_cross_hz"] = opt(report.f_force_cross);
    j["f_sensing_cross_hz"] = opt(report.f_sensing_cross);
    j["f_backaction_cross_hz"] = opt(report.f_backaction_cross);
    j["f_shot_cross_hz"] = opt(report.f_shot_cross);
    j["f_sql_touch_hz"] = opt(report.f_sql_touch);
    j["ratio"] = opt(report.ratio);
    j["tau_F_s"] = opt(report.tau_F);
    j["tau_q_s"] = opt(report.tau_q);
    j["tau_F_ms"] = report.tau_F ? nlohmann::json(sig9(*report.tau_F * 1e3)) : nlohmann::json(nullptr);
    j["tau_q_ms"] = report.tau_q ? nlohmann::json(sig9(*report.tau_q * 1e3)) : nlohmann::json(nullptr);
    if (report.tau_V_bounds) {
        j["tau_V_bounds_s"] = {sig9(report.tau_V_bounds->first), sig9(report.tau_V_bounds->second)};
    } else {
        j["tau_V_bounds_s"] = nullptr;
    }
    j["feasible"] = report.feasible;
    return j;
}

}  // namespace optomech::band
