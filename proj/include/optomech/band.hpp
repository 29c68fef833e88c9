#pragma once

#include <optional>
#include <utility>

#include "json.hpp"
#include "optomech/errors.hpp"
#include "optomech/params.hpp"
#include "optomech/spectra.hpp"

namespace optomech::band {

struct Bracket {
    double lo;  // Hz
    double hi;  // Hz
};

/// Thrown by find_crossing. Derives from NumericError so callers that only
/// care about "numeric failure" can catch the base.
class CrossingError : public NumericError {
public:
    enum class Kind { NoCrossing, Ambiguous };

    CrossingError(Kind kind, const std::string& message) : NumericError(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct CrossingOptions {
    int scan_points_per_decade = 200;
    double rel_tol = 1e-12;
};

/// Frequency in `bracket` where a.psd == b.psd. The sign of a - b is scanned
/// on a log grid; exactly one sign change (or exact zero) must be found, which
/// is then refined by bisection in log f on the continuous models.
double find_crossing(const spectra::SpectralModel& a, const spectra::SpectralModel& b, Bracket bracket,
                     CrossingOptions options = {});

/// Grid-based variant: sign changes are located on the curves' shared grid
/// (restricted to the bracket) and refined on the models for `cfg`.
double find_crossing(const spectra::SpectralCurve& a, const spectra::SpectralCurve& b, Bracket bracket,
                     const InterferometerConfig& cfg, double rel_tol = 1e-12);

struct BandReport {
    std::optional<double> f_force_cross;
    std::optional<double> f_sensing_cross;
    std::optional<double> f_backaction_cross;
    std::optional<double> f_shot_cross;
    std::optional<double> f_sql_touch;
    std::optional<double> ratio;
    std::optional<double> tau_F;
    std::optional<double> tau_q;
    std::optional<std::pair<double, double>> tau_V_bounds;
    bool feasible = false;
};

/// Ratio of sensing to force crossings above which conditional mirror
/// entanglement is possible.
inline constexpr double kFeasibilityRatio = 2.0;

struct AnalyzeOptions {
    double f_upper = 1e7;  // Hz; lower search edge is the pendulum resonance
    CrossingOptions crossing{};
};

BandReport analyze(const InterferometerConfig& cfg, AnalyzeOptions options = {});

nlohmann::json to_json(const BandReport& report);

}  // namespace optomech::band
