#include <cmath>

#include "doctest.h"
#include "optomech/band.hpp"
#include "oracles.hpp"

using namespace optomech;
using namespace optomech::band;
using spectra::CurveLabel;
using doctest::Approx;

namespace {

struct ClosedForm {
    double force, sensing, backaction, shot, touch;
};

// Every crossing against hoSQL reduces to |D(Omega)| = K with a closed-form K.
ClosedForm closed_form(const InterferometerConfig& cfg) {
    const double m = cfg.mirror_mass_m0 / 2.0;
    const double w0 = std::sqrt(oracle::kG / cfg.pendulum_length_L);
    const double w = oracle::kTwoPi * oracle::kC / cfg.wavelength_lambda;
    const double PG = cfg.circulating_power_P * cfg.signal_recycling_gain_G;
    const double c2 = oracle::kC * oracle::kC;
    ClosedForm out{};
    out.force = oracle::crossing_abs_d(2.0 * w0 * oracle::kB * cfg.temperature_T / (oracle::kHbar * cfg.quality_Q),
                                       w0, cfg.quality_Q);
    out.sensing = oracle::crossing_abs_d(
        2.0 * oracle::kHbar / (m * cfg.sensing_noise_asd * cfg.sensing_noise_asd), w0, cfg.quality_Q);
    out.backaction = oracle::crossing_abs_d(w * PG / (c2 * m), w0, cfg.quality_Q);
    out.shot = oracle::crossing_abs_d(4.0 * w * PG / (c2 * m), w0, cfg.quality_Q);
    out.touch = oracle::crossing_abs_d(2.0 * w * PG / (c2 * m), w0, cfg.quality_Q);
    return out;
}

}  // namespace

TEST_CASE("crossings match the closed-form oracle") {
    InterferometerConfig cfg;
    const auto oracle_hz = closed_form(cfg);
    CHECK(oracle_hz.force == Approx(87.09923422673228).epsilon(1e-10));
    CHECK(oracle_hz.sensing == Approx(2067.370169484002).epsilon(1e-10));

    const auto sql = spectra::model(cfg, CurveLabel::OscillatorSql);
    CHECK(oracle::rel(find_crossing(spectra::model(cfg, CurveLabel::PendulumThermal), sql, {10, 1000}),
                      oracle_hz.force) < 1e-9);
    CHECK(oracle::rel(find_crossing(spectra::model(cfg, CurveLabel::Sensing), sql, {100, 1e5}), oracle_hz.sensing) <
          1e-9);
}

TEST_CASE("find_crossing errors") {
    InterferometerConfig cfg;
    const auto sql = spectra::model(cfg, CurveLabel::OscillatorSql);
    const auto thermal = spectra::model(cfg, CurveLabel::PendulumThermal);
    try {
        find_crossing(thermal, sql, {200, 1000});
        FAIL("expected no crossing");
    } catch (const CrossingError& e) {
        CHECK(e.kind() == CrossingError::Kind::NoCrossing);
    }
    try {
        find_crossing(sql, sql, {10, 1000});
        FAIL("expected ambiguous bracket");
    } catch (const CrossingError& e) {
        CHECK(e.kind() == CrossingError::Kind::Ambiguous);
    }
    // Spanning the resonance: back-action crosses hoSQL on both sides when
    // the power is low enough, giving two sign changes.
    auto weak = cfg;
    weak.circulating_power_P = 1e-9;
    const auto ba = spectra::model(weak, CurveLabel::BackAction);
    const auto sql_weak = spectra::model(weak, CurveLabel::OscillatorSql);
    CHECK_THROWS_AS(find_crossing(ba, sql_weak, {0.01, 100}), CrossingError);
}

TEST_CASE("grid-based crossing refines on the continuous model") {
    InterferometerConfig cfg;
    const auto curves = spectra::budget(cfg, 10.0, 1e4, 20);
    const auto& thermal = curves[4];
    const auto& sql = curves[1];
    REQUIRE(thermal.label == CurveLabel::PendulumThermal);
    REQUIRE(sql.label == CurveLabel::OscillatorSql);
    CHECK(oracle::rel(find_crossing(thermal, sql, {10, 1000}, cfg), closed_form(cfg).force) < 1e-9);
    CHECK_THROWS_AS(find_crossing(sql, sql, {10, 1000}, cfg), CrossingError);

    auto other = thermal;
    other.frequencies.pop_back();
    other.values.pop_back();
    CHECK_THROWS_AS(find_crossing(other, sql, {10, 1000}, cfg), std::invalid_argument);
}

TEST_CASE("default analysis") {
    InterferometerConfig cfg;
    const auto r = analyze(cfg);
    const auto cf = closed_form(cfg);
    REQUIRE(r.f_force_cross);
    REQUIRE(r.f_sensing_cross);
    REQUIRE(r.f_backaction_cross);
    REQUIRE(r.f_shot_cross);
    REQUIRE(r.f_sql_touch);
    CHECK(oracle::rel(*r.f_force_cross, cf.force) < 1e-9);
    CHECK(oracle::rel(*r.f_sensing_cross, cf.sensing) < 1e-9);
    CHECK(oracle::rel(*r.f_backaction_cross, cf.backaction) < 1e-9);
    CHECK(oracle::rel(*r.f_shot_cross, cf.shot) < 1e-9);
    CHECK(oracle::rel(*r.f_sql_touch, cf.touch) < 1e-9);

    CHECK(*r.f_force_cross == Approx(87.1).epsilon(1e-3));
    CHECK(*r.f_sensing_cross == Approx(2067).epsilon(1e-3));
    CHECK(*r.ratio == Approx(23.7).epsilon(2e-3));
    CHECK(*r.f_backaction_cross == Approx(234).epsilon(1e-3));
    CHECK(*r.tau_q * 1e3 == Approx(0.68).epsilon(5e-3));
    CHECK(*r.f_sql_touch == Approx(331).epsilon(1e-3));
    CHECK(r.feasible);
    CHECK(r.tau_V_bounds->first == *r.tau_q);
    CHECK(r.tau_V_bounds->second == *r.tau_F);
    CHECK(*r.tau_F == Approx(1.0 / (oracle::kTwoPi * *r.f_force_cross)).epsilon(1e-15));

    // Geometric mean of the shot and back-action crossings (free-mass regime).
    CHECK(oracle::rel(*r.f_sql_touch, std::sqrt(*r.f_shot_cross * *r.f_backaction_cross)) < 1e-3);
}

TEST_CASE("raising T by 100 raises the force crossing by 10") {
    InterferometerConfig cfg;
    auto hot = cfg;
    hot.temperature_T *= 100.0;
    const auto a = analyze(cfg);
    const auto b = analyze(hot);
    CHECK(*b.f_force_cross / *a.f_force_cross == Approx(10.0).epsilon(1e-3));
    // 871 Hz against 2067 Hz: ratio 2.37 but tau_F < tau_q, so not feasible.
    CHECK(*b.ratio > kFeasibilityRatio);
    CHECK_FALSE(b.feasible);
}

TEST_CASE("scaling laws over two decades") {
    InterferometerConfig base;
    const auto r0 = analyze(base);
    for (double s : {0.1, 0.3, 3.0, 10.0}) {
        auto t = base;
        t.temperature_T *= s;
        CHECK(*analyze(t).f_force_cross / *r0.f_force_cross == Approx(std::sqrt(s)).epsilon(0.005));
        auto q = base;
        q.quality_Q *= s;
        CHECK(*analyze(q).f_force_cross / *r0.f_force_cross == Approx(1.0 / std::sqrt(s)).epsilon(0.005));
        auto p = base;
        p.circulating_power_P *= s;
        CHECK(*analyze(p).f_backaction_cross / *r0.f_backaction_cross == Approx(std::sqrt(s)).epsilon(0.005));
        auto g = base;
        g.signal_recycling_gain_G *= s;
        CHECK(*analyze(g).f_backaction_cross / *r0.f_backaction_cross == Approx(std::sqrt(s)).epsilon(0.005));
    }
}

TEST_CASE("results do not depend on the scan density") {
    InterferometerConfig cfg;
    AnalyzeOptions fine, coarse;
    fine.crossing.scan_points_per_decade = 200;
    coarse.crossing.scan_points_per_decade = 100;
    const auto a = analyze(cfg, fine);
    const auto b = analyze(cfg, coarse);
    CHECK(oracle::rel(*a.f_force_cross, *b.f_force_cross) < 1e-6);
    CHECK(oracle::rel(*a.f_sensing_cross, *b.f_sensing_cross) < 1e-6);
    CHECK(oracle::rel(*a.f_backaction_cross, *b.f_backaction_cross) < 1e-6);
    CHECK(oracle::rel(*a.f_sql_touch, *b.f_sql_touch) < 1e-6);
}

TEST_CASE("missing crossings mark the report infeasible") {
    InterferometerConfig cold;
    cold.temperature_T = 0.0;
    const auto r = analyze(cold);
    CHECK_FALSE(r.f_force_cross);
    CHECK_FALSE(r.tau_F);
    CHECK_FALSE(r.ratio);
    CHECK_FALSE(r.feasible);

    InterferometerConfig dark;
    dark.circulating_power_P = 0.0;
    const auto d = analyze(dark);
    CHECK_FALSE(d.f_backaction_cross);
    CHECK_FALSE(d.f_sql_touch);
    CHECK_FALSE(d.feasible);

    const auto j = to_json(r);
    CHECK(j["f_force_cross_hz"].is_null());
    CHECK(j["feasible"] == false);
}

TEST_CASE("feasible implies tau_F > tau_q") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int feasible = 0;
    for (int i = 0; i < 60; ++i) {
        InterferometerConfig cfg;
        cfg.temperature_T = 300.0 * u(rng) * u(rng);
        cfg.circulating_power_P = 10.0 + 1e4 * u(rng);
        cfg.sensing_noise_asd = 1e-21 + 5e-20 * u(rng);
        const auto r = analyze(cfg);
        if (r.feasible) {
            ++feasible;
            CHECK(*r.tau_F > *r.tau_q);
            CHECK(*r.ratio > 2.0);
        }
    }
    CHECK(feasible > 0);
}

TEST_CASE("report json") {
    const auto j = to_json(analyze(InterferometerConfig{}));
    CHECK(j["feasible"] == true);
    CHECK(j["ratio"].get<double>() == Approx(23.7358019).epsilon(1e-9));
    CHECK(j["tau_F_ms"].get<double>() == Approx(1.82728292).epsilon(1e-9));
    CHECK(j["tau_V_bounds_s"].size() == 2);
}
