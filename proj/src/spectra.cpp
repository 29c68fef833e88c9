#include "optomech/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace optomech::spectra {

namespace {

using C = PhysicalConstants;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_frequency(double f) {
    if (!(f > 0.0)) throw std::domain_error("sideband frequency must be positive");
}

double abs_denominator(double omega, double omega0, double Q) {
    return std::hypot(omega0 * omega0 - omega * omega, omega * omega0 / Q);
}

// 1 / (m^2 |D|^2): force PSD -> displacement PSD.
double force_to_displacement(const InterferometerConfig& cfg, double f) {
    require_positive_frequency(f);
    const auto d = derive(cfg);
    const double D = abs_denominator(kTwoPi * f, d.pendulum_omega0, cfg.quality_Q);
    return 1.0 / (d.reduced_mass_m * d.reduced_mass_m * D * D);
}

}  // namespace

std::string_view label_name(CurveLabel label) {
    switch (label) {
        case CurveLabel::FreeMassSql: return "fmSQL";
        case CurveLabel::OscillatorSql: return "hoSQL";
        case CurveLabel::Shot: return "shot";
        case CurveLabel::BackAction: return "backaction";
        case CurveLabel::PendulumThermal: return "pendulum_thermal";
        case CurveLabel::Sensing: return "sensing";
        case CurveLabel::ClassicalForce: return "classical_force";
        case CurveLabel::TotalQuantum: return "total_quantum";
        case CurveLabel::TotalClassical: return "total_classical";
        case CurveLabel::ForceClassical: return "force_classical";
    }
    return "unknown";
}

std::complex<double> susceptibility_denominator(double omega, double omega0, double Q) {
    return {omega0 * omega0 - omega * omega, omega * omega0 / Q};
}

double sql_free_mass(double m, double f) {
    require_positive_frequency(f);
    if (!(m > 0.0)) throw std::domain_error("mass must be positive");
    const double omega = kTwoPi * f;
    return 2.0 * C::hbar / (m * omega * omega);
}

double sql_harmonic(double m, double f, double omega0, double Q) {
    require_positive_frequency(f);
    if (!(m > 0.0)) throw std::domain_error("mass must be positive");
    if (!(omega0 >= 0.0) || !(Q > 0.0)) throw std::domain_error("omega0 must be >= 0 and Q > 0");
    return 2.0 * C::hbar / (m * abs_denominator(kTwoPi * f, omega0, Q));
}

double shot_noise(const InterferometerConfig& cfg) {
    if (!(cfg.circulating_power_P > 0.0)) throw std::domain_error("shot noise diverges at zero optical power");
    const auto d = derive(cfg);
    return d.shot_noise_factor * C::hbar * C::c * C::c /
           (2.0 * d.optical_omega * cfg.circulating_power_P * cfg.signal_recycling_gain_G);
}

double backaction_force_psd(const InterferometerConfig& cfg) {
    const auto d = derive(cfg);
    return d.backaction_factor * 2.0 * C::hbar * d.optical_omega * cfg.circulating_power_P *
           cfg.signal_recycling_gain_G / (C::c * C::c);
}

double thermal_force_psd(const InterferometerConfig& cfg) {
    const auto d = derive(cfg);
    return 4.0 * d.reduced_mass_m * d.pendulum_omega0 * C::k_B * cfg.temperature_T / cfg.quality_Q;
}

double radiation_pressure_noise(const InterferometerConfig& cfg, double f) {
    return force_to_displacement(cfg, f) * backaction_force_psd(cfg);
}

double pendulum_thermal(const InterferometerConfig& cfg, double f) {
    return force_to_displacement(cfg, f) * thermal_force_psd(cfg);
}

double sensing_noise(const InterferometerConfig& cfg) { return cfg.sensing_noise_asd * cfg.sensing_noise_asd; }

double classical_force_noise(const InterferometerConfig& cfg, double f) {
    return force_to_displacement(cfg, f) * cfg.classical_force_noise_asd * cfg.classical_force_noise_asd;
}

double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0) || !(T >= 0.0)) throw std::domain_error("thermal_occupation needs omega > 0, T >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(C::hbar * omega / (C::k_B * T));
}

double zero_point_fluctuation(double m, double omega) {
    if (!(m > 0.0) || !(omega > 0.0)) throw std::domain_error("zero_point_fluctuation needs m > 0, omega > 0");
    return std::sqrt(C::hbar / (2.0 * m * omega));
}

SpectralModel model(const InterferometerConfig& cfg, CurveLabel label) {
    const auto d = derive(cfg);
    const double m = d.reduced_mass_m;
    const double w0 = d.pendulum_omega0;
    const double Q = cfg.quality_Q;
    std::function<double(double)> fn;
    switch (label) {
        case CurveLabel::FreeMassSql:
            fn = [m](double f) { return sql_free_mass(m, f); };
            break;
        case CurveLabel::OscillatorSql:
            fn = [m, w0, Q](double f) { return sql_harmonic(m, f, w0, Q); };
            break;
        case CurveLabel::Shot: {
            const double s = shot_noise(cfg);
            fn = [s](double f) {
                require_positive_frequency(f);
                return s;
            };
            break;
        }
        case CurveLabel::BackAction:
            fn = [cfg](double f) { return radiation_pressure_noise(cfg, f); };
            break;
        case CurveLabel::PendulumThermal:
            fn = [cfg](double f) { return pendulum_thermal(cfg, f); };
            break;
        case CurveLabel::Sensing: {
            const double s = sensing_noise(cfg);
            fn = [s](double f) {
                require_positive_frequency(f);
                return s;
            };
            break;
        }
        case CurveLabel::ClassicalForce:
            fn = [cfg](double f) { return classical_force_noise(cfg, f); };
            break;
        case CurveLabel::TotalQuantum: {
            const double s = shot_noise(cfg);
            fn = [cfg, s](double f) { return s + radiation_pressure_noise(cfg, f); };
            break;
        }
        case CurveLabel::TotalClassical:
            fn = [cfg](double f) {
                return pendulum_thermal(cfg, f) + sensing_noise(cfg) + classical_force_noise(cfg, f);
            };
            break;
        case CurveLabel::ForceClassical:
            fn = [cfg](double f) { return pendulum_thermal(cfg, f) + classical_force_noise(cfg, f); };
            break;
    }
    return {label, std::move(fn)};
}

std::vector<double> log_grid(double f_min, double f_max, int points_per_decade) {
    if (!(f_min > 0.0) || !(f_max > f_min)) throw std::domain_error("grid needs 0 < f_min < f_max");
    if (points_per_decade < 1) throw std::domain_error("points_per_decade must be at least 1");
    const double decades = std::log10(f_max / f_min);
    const auto steps = static_cast<long>(std::floor(decades * points_per_decade + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps) + 2);
    for (long i = 0; i <= steps; ++i) {
        grid.push_back(f_min * std::pow(10.0, static_cast<double>(i) / points_per_decade));
    }
    if (grid.back() < f_max * (1.0 - 1e-12)) {
        grid.push_back(f_max);
    } else {
        grid.back() = f_max;
    }
    return grid;
}

std::vector<SpectralCurve> evaluate(const InterferometerConfig& cfg, std::span<const double> frequencies,
                                    unsigned threads) {
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        require_positive_frequency(frequencies[i]);
        if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
            throw std::domain_error("frequencies must be strictly increasing");
        }
    }

    std::vector<SpectralModel> models;
    std::vector<SpectralCurve> curves;
    for (CurveLabel label : kBudgetLabels) {
        models.push_back(model(cfg, label));
        curves.push_back({label, {frequencies.begin(), frequencies.end()}, std::vector<double>(frequencies.size())});
    }

    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = 0; k < models.size(); ++k) {
            for (std::size_t i = begin; i < end; ++i) curves[k].values[i] = models[k].psd(frequencies[i]);
        }
    };

    const std::size_t n = frequencies.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        fill(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            pool.emplace_back(fill, begin, std::min(n, begin + chunk));
        }
        for (auto& t : pool) t.join();
    }
    return curves;
}

std::vector<SpectralCurve> budget(const InterferometerConfig& cfg, double f_min, double f_max,
                                  int points_per_decade, unsigned threads) {
    const auto grid = log_grid(f_min, f_max, points_per_decade);
    return evaluate(cfg, grid, threads);
}

void write_csv(std::ostream& out, std::span<const SpectralCurve> curves) {
    out << "frequency_hz";
    for (const auto& c : curves) out << ',' << label_name(c.label) << "_psd_m2_per_hz";
    out << '\n';
    if (curves.empty()) return;

    char buf[32];
    const auto& freqs = curves.front().frequencies;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.8e", freqs[i]);
        out << buf;
        for (const auto& c : curves) {
            std::snprintf(buf, sizeof buf, "%.8e", c.values[i]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace optomech::spectra
