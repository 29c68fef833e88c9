#include "optomech/conditional.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "optomech/band.hpp"
#include "optomech/errors.hpp"
#include "optomech/format.hpp"
#include "optomech/spectra.hpp"

namespace optomech::conditional {

namespace {

using C = PhysicalConstants;

// Solves Ac X + X Ac^T + M = 0 for symmetric X.
Eigen::Matrix2d solve_lyapunov(const Eigen::Matrix2d& Ac, const Eigen::Matrix2d& M) {
    const double a = Ac(0, 0), b = Ac(0, 1), c = Ac(1, 0), d = Ac(1, 1);
    Eigen::Matrix3d L;
    // unknowns (x00, x01, x11)
    L << 2 * a, 2 * b, 0,
         c, a + d, b,
         0, 2 * c, 2 * d;
    const Eigen::Vector3d rhs(-M(0, 0), -M(0, 1), -M(1, 1));
    const Eigen::Vector3d x = L.fullPivLu().solve(rhs);
    Eigen::Matrix2d X;
    X << x(0), x(1), x(1), x(2);
    return X;
}

bool is_stable(const Eigen::Matrix2d& A) { return A.trace() < 0.0 && A.determinant() > 0.0; }

double max_abs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

std::string_view to_string(MirrorMode mode) { return mode == MirrorMode::Common ? "common" : "differential"; }

MirrorModeModel build_model(const InterferometerConfig& cfg, MirrorMode mode, double readout_angle) {
    validate(cfg);
    const auto d = derive(cfg);

    InterferometerConfig channel = cfg;
    channel.signal_recycling_gain_G *=
        mode == MirrorMode::Common ? cfg.common_gain_ratio : cfg.differential_gain_ratio;

    const auto shot = spectra::model(cfg, spectra::CurveLabel::Shot);
    const auto backaction = spectra::model(cfg, spectra::CurveLabel::BackAction);
    const double f_touch = band::find_crossing(shot, backaction, {d.pendulum_omega0 / (2.0 * std::numbers::pi), 1e7});

    MirrorModeModel m{};
    m.mode = mode;
    m.mass = d.reduced_mass_m;
    m.omega0 = d.pendulum_omega0;
    m.Q = cfg.quality_Q;
    m.force_noise_psd = spectra::thermal_force_psd(cfg) + spectra::backaction_force_psd(channel) +
                        cfg.classical_force_noise_asd * cfg.classical_force_noise_asd;
    m.measurement_noise_psd = spectra::shot_noise(channel) + spectra::sensing_noise(cfg);
    m.readout_quadrature_angle = readout_angle;
    m.reference_omega = 2.0 * std::numbers::pi * f_touch;
    return m;
}

NormalizedSystem normalize(const MirrorModeModel& model) {
    const double wr = model.reference_omega;
    const double w = model.omega0 / wr;
    NormalizedSystem sys{};
    sys.drift << 0.0, 1.0, -w * w, -model.omega0 / (model.Q * wr);
    sys.force_diffusion = model.force_noise_psd / (2.0 * C::hbar * model.mass * wr * wr);
    sys.measurement_noise = model.measurement_noise_psd * model.mass * wr * wr / (2.0 * C::hbar);
    return sys;
}

Eigen::Matrix2d riccati_rhs(const NormalizedSystem& sys, const Eigen::Matrix2d& cov) {
    const Eigen::Vector2d s = cov.col(0);
    Eigen::Matrix2d out = sys.drift * cov + cov * sys.drift.transpose() - s * s.transpose() / sys.measurement_noise;
    out(1, 1) += sys.force_diffusion;
    return out;
}

ConditionalStateReport describe(const Eigen::Matrix2d& cov) {
    ConditionalStateReport r{};
    r.cov = cov;
    r.purity = 1.0 / (2.0 * std::sqrt(cov.determinant()));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const Eigen::Vector2d minor = es.eigenvectors().col(0);
    double angle = std::atan2(minor(1), minor(0));
    if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
    if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
    r.squeeze_angle = angle;
    r.squeeze_factor = 2.0 * es.eigenvalues()(0);
    return r;
}

ConditionalStateReport steady_conditional_cov(const MirrorModeModel& model, const SolverOptions& options) {
    if (!(model.measurement_noise_psd > 0.0)) throw std::domain_error("measurement noise PSD must be positive");
    if (!(model.force_noise_psd >= 0.0)) throw std::domain_error("force noise PSD must be non-negative");
    if (!(model.mass > 0.0) || !(model.omega0 > 0.0) || !(model.reference_omega > 0.0)) {
        throw std::domain_error("mass, omega0 and reference omega must be positive");
    }

    const NormalizedSystem sys = normalize(model);
    const double rho = sys.measurement_noise;

    Eigen::Matrix2d cov;
    if (options.initial_cov) {
        cov = *options.initial_cov;
    } else {
        const double b = std::sqrt(sys.force_diffusion * rho);
        const double a = std::sqrt(2.0 * b * rho);
        cov << a, b, b, a * b / rho;
    }

    const Eigen::Matrix2d D = Eigen::Vector2d(0.0, sys.force_diffusion).asDiagonal();
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const Eigen::Vector2d gain = cov.col(0) / rho;
        Eigen::Matrix2d closed = sys.drift;
        closed.col(0) -= gain;
        if (!is_stable(closed)) {
            std::ostringstream msg;
            msg << "Riccati solver: non-stabilising gain at iteration " << iter
                << ", residual " << max_abs(riccati_rhs(sys, cov));
            throw NumericError(msg.str());
        }
        const Eigen::Matrix2d next = solve_lyapunov(closed, D + rho * gain * gain.transpose());
        const double step = max_abs(next - cov);
        cov = 0.5 * (next + next.transpose());
        if (step <= options.tolerance * std::max(1.0, max_abs(cov))) {
            ++iter;
            break;
        }
    }

    const double residual = max_abs(riccati_rhs(sys, cov));
    if (iter >= options.max_iterations || !std::isfinite(residual) || residual > 1e-10) {
        std::ostringstream msg;
        msg << "Riccati solver did not converge after " << iter << " iterations, residual " << residual;
        throw NumericError(msg.str());
    }

    ConditionalStateReport r = describe(cov);
    r.residual = residual;
    r.iterations = iter;
    return r;
}

TwoMirrorState two_mirror_state(const Eigen::Matrix2d& common_cov, const Eigen::Matrix2d& differential_cov) {
    using gaussian::GaussianState;
    const GaussianState common(Eigen::Vector2d::Zero(), common_cov);
    const GaussianState diff(Eigen::Vector2d::Zero(), differential_cov);
    const GaussianState joint = gaussian::direct_sum(common, diff);

    const double h = std::numbers::sqrt2 / 2.0;
    gaussian::Matrix S = gaussian::Matrix::Zero(4, 4);
    for (int q = 0; q < 2; ++q) {
        S(q, q) = h;          // A <- c
        S(q, 2 + q) = h;      // A <- d
        S(2 + q, q) = h;      // B <- c
        S(2 + q, 2 + q) = -h; // B <- -d
    }
    GaussianState mirrors = gaussian::apply_symplectic(joint, S);
    auto epr = gaussian::epr_report(mirrors, 0, 1);
    return {std::move(mirrors), epr};
}

TwoMirrorState two_mirror_state(const ConditionalStateReport& common, const ConditionalStateReport& differential) {
    return two_mirror_state(common.cov, differential.cov);
}

nlohmann::json to_json(const MirrorModeModel& m) {
    return {
        {"mode", std::string(to_string(m.mode))},
        {"mass_kg", sig9(m.mass)},
        {"omega0_rad_s", sig9(m.omega0)},
        {"quality_Q", sig9(m.Q)},
        {"force_noise_psd_n2_per_hz", sig9(m.force_noise_psd)},
        {"measurement_noise_psd_m2_per_hz", sig9(m.measurement_noise_psd)},
        {"readout_quadrature_angle_rad", sig9(m.readout_quadrature_angle)},
        {"reference_omega_rad_s", sig9(m.reference_omega)},
    };
}

nlohmann::json to_json(const ConditionalStateReport& r) {
    return {
        {"cov", {{sig9(r.cov(0, 0)), sig9(r.cov(0, 1))}, {sig9(r.cov(1, 0)), sig9(r.cov(1, 1))}}},
        {"purity", sig9(r.purity)},
        {"squeeze_angle_rad", sig9(r.squeeze_angle)},
        {"squeeze_factor", sig9(r.squeeze_factor)},
        {"riccati_residual", sig9(r.residual)},
        {"iterations", r.iterations},
    };
}

}  // namespace optomech::conditional
