#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "optomech/conditional.hpp"
#include "optomech/errors.hpp"
#include "oracles.hpp"

using namespace optomech;
using namespace optomech::conditional;
using doctest::Approx;

namespace {

// scipy.linalg.solve_continuous_are on the default configuration.
constexpr double kDefaultPurity = 0.9140886563592712;

double max_diff(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("mode model from the configuration") {
    InterferometerConfig cfg;
    const auto m = build_model(cfg, MirrorMode::Differential);
    const double w0 = std::sqrt(oracle::kG / 0.3);
    const double w = oracle::kTwoPi * oracle::kC / 1.55e-6;
    const double thermal = 4.0 * 0.05 * w0 * oracle::kB * 4.0 / 2e7;
    const double backaction = 2.0 * oracle::kHbar * w * 4000.0 * 2000.0 / (oracle::kC * oracle::kC);
    const double shot = oracle::kHbar * oracle::kC * oracle::kC / (2.0 * w * 4000.0 * 2000.0);
    CHECK(m.mass == 0.05);
    CHECK(m.force_noise_psd == Approx(thermal + backaction).epsilon(1e-12));
    CHECK(m.measurement_noise_psd == Approx(shot + 2.5e-41).epsilon(1e-12));
    CHECK(m.reference_omega == Approx(oracle::kTwoPi * 331.0628851189462).epsilon(1e-9));
    CHECK(m.readout_quadrature_angle == 0.0);

    CHECK(build_model(cfg, MirrorMode::Common, 0.42).readout_quadrature_angle == 0.42);

    auto split = cfg;
    split.common_gain_ratio = 0.5;
    const auto c = build_model(split, MirrorMode::Common);
    CHECK(c.force_noise_psd == Approx(thermal + backaction / 2).epsilon(1e-12));
    CHECK(c.measurement_noise_psd == Approx(2 * shot + 2.5e-41).epsilon(1e-12));
    CHECK(c.reference_omega == m.reference_omega);

    auto quiet = cfg;
    quiet.temperature_T = 0.0;
    quiet.circulating_power_P = 1e-6;
    CHECK(build_model(quiet, MirrorMode::Differential).force_noise_psd < 1e-9 * m.force_noise_psd);
}

TEST_CASE("default steady state") {
    const auto r = steady_conditional_cov(build_model(InterferometerConfig{}, MirrorMode::Differential));
    CHECK(r.residual <= 1e-10);
    CHECK(r.purity == Approx(kDefaultPurity).epsilon(1e-9));
    CHECK(r.cov(0, 0) == Approx(7.583184998122e-01).epsilon(1e-9));
    CHECK(r.cov(0, 1) == Approx(5.469889220127e-01).epsilon(1e-9));
    CHECK(r.cov(1, 1) == Approx(7.891118410276e-01).epsilon(1e-9));
    CHECK(r.squeeze_factor < 1.0);
    CHECK(r.purity <= 1.0);
}

TEST_CASE("Newton solution agrees with integrating the Riccati flow") {
    const auto model = build_model(InterferometerConfig{}, MirrorMode::Differential);
    const auto sys = normalize(model);
    const auto r = steady_conditional_cov(model);
    const Eigen::Matrix2d starts[] = {
        0.5 * Eigen::Matrix2d::Identity(),
        Eigen::Vector2d(3.0, 0.2).asDiagonal(),
        (Eigen::Matrix2d() << 1.0, -0.4, -0.4, 2.0).finished(),
    };
    for (const auto& s0 : starts) {
        const Eigen::Matrix2d limit = oracle::integrate_riccati(sys.drift, sys.force_diffusion, sys.measurement_noise,
                                                                s0, 1e-3, 200.0);
        CHECK(max_diff(limit, r.cov) < 1e-8);
    }
    CHECK(riccati_rhs(sys, r.cov).cwiseAbs().maxCoeff() == r.residual);
}

TEST_CASE("solution does not depend on the starting covariance") {
    const auto model = build_model(InterferometerConfig{}, MirrorMode::Differential);
    SolverOptions opt;
    opt.initial_cov = (Eigen::Matrix2d() << 5.0, 1.0, 1.0, 5.0).finished();
    const auto a = steady_conditional_cov(model);
    const auto b = steady_conditional_cov(model, opt);
    CHECK(max_diff(a.cov, b.cov) < 1e-12);
}

TEST_CASE("quantum-limited free mass is pure") {
    InterferometerConfig cfg;
    cfg.temperature_T = 0.0;
    cfg.sensing_noise_asd = 0.0;
    auto m = build_model(cfg, MirrorMode::Differential);
    CHECK(m.force_noise_psd * m.measurement_noise_psd == Approx(oracle::kHbar * oracle::kHbar).epsilon(1e-12));
    m.omega0 = 1e-9 * m.reference_omega;
    const auto r = steady_conditional_cov(m);
    CHECK(r.purity == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("purity approaches one as excess force noise vanishes") {
    InterferometerConfig cfg;
    cfg.sensing_noise_asd = 0.0;
    double prev = 0.0;
    for (double T : {4.0, 0.4, 0.04, 0.004, 0.0}) {
        cfg.temperature_T = T;
        const double p = steady_conditional_cov(build_model(cfg, MirrorMode::Differential)).purity;
        CHECK(p > prev);
        prev = p;
    }
    CHECK(prev == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("purity decreases with temperature and sensing noise") {
    const double temps[] = {0.5, 1.0, 2.0, 4.0, 8.0};
    const double sensing[] = {1e-21, 2.5e-21, 5e-21, 1e-20, 2e-20};
    double grid[5][5];
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            InterferometerConfig cfg;
            cfg.temperature_T = temps[i];
            cfg.sensing_noise_asd = sensing[j];
            const auto r = steady_conditional_cov(build_model(cfg, MirrorMode::Differential));
            CHECK(r.residual <= 1e-10);
            grid[i][j] = r.purity;
        }
    }
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            if (i + 1 < 5) CHECK(grid[i + 1][j] < grid[i][j]);
            if (j + 1 < 5) CHECK(grid[i][j + 1] < grid[i][j]);
        }
    }
}

TEST_CASE("conditional states respect the uncertainty bound") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        InterferometerConfig cfg;
        cfg.temperature_T = 10.0 * u(rng);
        cfg.sensing_noise_asd = 3e-20 * u(rng);
        cfg.circulating_power_P = 100.0 + 8000.0 * u(rng);
        cfg.squeeze_parameter_r = u(rng);
        const auto r = steady_conditional_cov(build_model(cfg, MirrorMode::Common));
        CHECK(r.cov.determinant() >= 0.25 - 1e-8);
        CHECK(r.residual <= 1e-10);
    }
}

TEST_CASE("solver failures raise NumericError") {
    auto m = build_model(InterferometerConfig{}, MirrorMode::Differential);
    SolverOptions opt;
    opt.max_iterations = 1;
    CHECK_THROWS_AS(steady_conditional_cov(m, opt), NumericError);
    SolverOptions unstable;
    unstable.initial_cov = (Eigen::Matrix2d() << -1.0, 0.0, 0.0, 1.0).finished();
    CHECK_THROWS_AS(steady_conditional_cov(m, unstable), NumericError);
    m.measurement_noise_psd = 0.0;
    CHECK_THROWS_AS(steady_conditional_cov(m), std::domain_error);
}

TEST_CASE("two-mirror state") {
    const double r = 1.0;
    const Eigen::Matrix2d common = Eigen::Vector2d(std::exp(2 * r) / 2, std::exp(-2 * r) / 2).asDiagonal();
    const Eigen::Matrix2d diff = Eigen::Vector2d(std::exp(-2 * r) / 2, std::exp(2 * r) / 2).asDiagonal();
    const auto ent = two_mirror_state(common, diff);
    CHECK(std::abs(ent.epr.log_negativity - 2.0) < 1e-9);
    CHECK(ent.epr.epr_certified);

    const auto same = two_mirror_state(common, common);
    CHECK(same.epr.log_negativity == 0.0);

    const Eigen::Matrix2d vac = 0.5 * Eigen::Matrix2d::Identity();
    const auto v = two_mirror_state(vac, vac);
    CHECK(v.epr.reid_product == Approx(0.25).epsilon(1e-14));
    CHECK_FALSE(v.epr.epr_certified);

    const auto rc = steady_conditional_cov(build_model(InterferometerConfig{}, MirrorMode::Common));
    const auto rd = steady_conditional_cov(build_model(InterferometerConfig{}, MirrorMode::Differential));
    const auto mirrors = two_mirror_state(rc, rd);
    Eigen::VectorXd before(2);
    before << gaussian::symplectic_eigenvalues(rc.cov)(0), gaussian::symplectic_eigenvalues(rd.cov)(0);
    std::sort(before.data(), before.data() + 2);
    const Eigen::VectorXd after = gaussian::symplectic_eigenvalues(mirrors.state.cov());
    CHECK((after - before).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mirrors.epr.log_negativity == 0.0);
}

TEST_CASE("json layout") {
    const auto model = build_model(InterferometerConfig{}, MirrorMode::Common);
    const auto j = to_json(model);
    CHECK(j["mode"] == "common");
    const auto r = to_json(steady_conditional_cov(model));
    CHECK(r["cov"].size() == 2);
    CHECK(r["purity"].get<double>() == Approx(kDefaultPurity).epsilon(1e-8));
}
