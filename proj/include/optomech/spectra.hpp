#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "optomech/params.hpp"

namespace optomech::spectra {

// All spectral densities are one-sided displacement PSDs in m^2/Hz, evaluated
// at sideband frequency f (Hz). The quantum-noise terms use the small-sideband
// approximation at every frequency (no signal-recycling cavity pole).

enum class CurveLabel {
    FreeMassSql,
    OscillatorSql,
    Shot,
    BackAction,
    PendulumThermal,
    Sensing,
    ClassicalForce,
    TotalQuantum,
    TotalClassical,
    // Force-type classical noise (pendulum thermal + classical force) used for
    // the decoherence crossing. Not emitted in the budget CSV.
    ForceClassical,
};

std::string_view label_name(CurveLabel label);

/// Labels emitted by budget(), in CSV column order.
inline constexpr CurveLabel kBudgetLabels[] = {
    CurveLabel::FreeMassSql,     CurveLabel::OscillatorSql, CurveLabel::Shot,
    CurveLabel::BackAction,      CurveLabel::PendulumThermal, CurveLabel::Sensing,
    CurveLabel::ClassicalForce,  CurveLabel::TotalQuantum,  CurveLabel::TotalClassical,
};

struct SpectralCurve {
    CurveLabel label;
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<double> values;       // m^2/Hz
};

/// Continuous PSD model behind a curve; used for root refinement.
struct SpectralModel {
    CurveLabel label;
    std::function<double(double)> psd;
};

/// D(Omega) = -Omega^2 + Omega0^2 + i Omega Omega0 / Q, units s^-2.
std::complex<double> susceptibility_denominator(double omega, double omega0, double Q);

double sql_free_mass(double m, double f);
double sql_harmonic(double m, double f, double omega0, double Q);
double shot_noise(const InterferometerConfig& cfg);
double radiation_pressure_noise(const InterferometerConfig& cfg, double f);
double pendulum_thermal(const InterferometerConfig& cfg, double f);
double sensing_noise(const InterferometerConfig& cfg);
double classical_force_noise(const InterferometerConfig& cfg, double f);

/// Bose-Einstein occupation; 0 at T = 0.
double thermal_occupation(double omega, double T);
/// sqrt(hbar / (2 m Omega)) in metres.
double zero_point_fluctuation(double m, double omega);

/// Back-action force PSD 2 hbar omega P G / c^2 (times squeeze factor), N^2/Hz.
double backaction_force_psd(const InterferometerConfig& cfg);
/// Viscous-damping thermal force PSD 4 m Omega0 k_B T / Q, N^2/Hz.
double thermal_force_psd(const InterferometerConfig& cfg);

SpectralModel model(const InterferometerConfig& cfg, CurveLabel label);

/// Logarithmic grid from f_min to f_max with the given density; f_max is
/// always the last point.
std::vector<double> log_grid(double f_min, double f_max, int points_per_decade);

/// Evaluates every budget curve on an explicit grid. `threads` > 1 splits the
/// grid across worker threads; output does not depend on the thread count.
std::vector<SpectralCurve> evaluate(const InterferometerConfig& cfg, std::span<const double> frequencies,
                                    unsigned threads = 1);

std::vector<SpectralCurve> budget(const InterferometerConfig& cfg, double f_min, double f_max,
                                  int points_per_decade, unsigned threads = 1);

/// `frequency_hz,<label>_psd_m2_per_hz,...`, 9 significant digits.
void write_csv(std::ostream& out, std::span<const SpectralCurve> curves);

}  // namespace optomech::spectra
