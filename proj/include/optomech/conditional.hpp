#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/params.hpp"

/// Steady-state conditional (a-posteriori) state of a mirror mode that is
/// continuously monitored in position.
///
/// State-space model, per mode:
///     dx/dt = p / m
///     dp/dt = -m Omega0^2 x - (Omega0 / Q) p + F
///     y     = x + n
/// with F and n white, uncorrelated, one-sided PSDs S_F and S_x. The filter
/// Riccati equation uses the two-sided densities S_F/2 and S_x/2, so a
/// quantum-limited readout (S_F S_x = hbar^2) yields a pure conditional state
/// for a free mass.
///
/// Covariances are reported in units x0 = sqrt(hbar / (m Omega_ref)) and
/// p0 = sqrt(hbar m Omega_ref), time in 1/Omega_ref, where Omega_ref is the
/// angular frequency at which the total quantum noise touches the SQL. In
/// these units [x, p] = i and the vacuum covariance is I/2.
namespace optomech::conditional {

enum class MirrorMode { Common, Differential };

std::string_view to_string(MirrorMode mode);

struct MirrorModeModel {
    MirrorMode mode;
    double mass;                   // kg, reduced
    double omega0;                 // rad/s
    double Q;
    double force_noise_psd;        // N^2/Hz, one-sided
    double measurement_noise_psd;  // m^2/Hz, one-sided
    double readout_quadrature_angle;  // rad, recorded only
    double reference_omega;        // rad/s, normalisation
};

/// Force PSD: pendulum thermal + back-action (+ classical force); measurement
/// PSD: shot noise + sensing noise. The mode's recycling gain is
/// signal_recycling_gain_G times the per-channel ratio from the config.
MirrorModeModel build_model(const InterferometerConfig& cfg, MirrorMode mode, double readout_angle = 0.0);

/// Dimensionless linear system in normalised units.
struct NormalizedSystem {
    Eigen::Matrix2d drift;      // [[0, 1], [-(Omega0/Omega_ref)^2, -Omega0/(Q Omega_ref)]]
    double force_diffusion;     // two-sided force density, normalised
    double measurement_noise;   // two-sided position-noise density, normalised
};

NormalizedSystem normalize(const MirrorModeModel& model);

/// A S + S A^T + D - S C^T R^{-1} C S with C = [1 0], D = diag(0, force).
Eigen::Matrix2d riccati_rhs(const NormalizedSystem& sys, const Eigen::Matrix2d& cov);

struct SolverOptions {
    int max_iterations = 100;
    double tolerance = 1e-14;
    // Starting covariance for the Newton iteration; must yield a stabilising
    // gain. Defaults to the free-mass closed form.
    std::optional<Eigen::Matrix2d> initial_cov;
};

struct ConditionalStateReport {
    Eigen::Matrix2d cov;    // normalised units
    double purity;          // 1 / (2 sqrt(det cov))
    double squeeze_angle;   // rad, orientation of the minor axis in (-pi/2, pi/2]
    double squeeze_factor;  // minor-axis variance relative to vacuum (1/2)
    double residual;        // max |riccati_rhs| at cov
    int iterations;
};

/// Solves the algebraic Riccati equation by Newton-Kleinman iteration. Throws
/// NumericError (with the residual) if it fails to converge.
ConditionalStateReport steady_conditional_cov(const MirrorModeModel& model, const SolverOptions& options = {});

/// Report quantities for an arbitrary normalised 2x2 covariance.
ConditionalStateReport describe(const Eigen::Matrix2d& cov);

struct TwoMirrorState {
    gaussian::GaussianState state;  // modes A, B
    gaussian::EprReport epr;
};

/// Embeds the common (c) and differential (d) conditional states as
/// independent modes and rotates to mirror coordinates
/// x_A = (x_c + x_d)/sqrt(2), x_B = (x_c - x_d)/sqrt(2), same for p.
TwoMirrorState two_mirror_state(const Eigen::Matrix2d& common_cov, const Eigen::Matrix2d& differential_cov);
TwoMirrorState two_mirror_state(const ConditionalStateReport& common, const ConditionalStateReport& differential);

nlohmann::json to_json(const MirrorModeModel& model);
nlohmann::json to_json(const ConditionalStateReport& report);

}  // namespace optomech::conditional
