#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funrate/inference.hpp"
#include "funrate/stats.hpp"
#include "funrate/synth.hpp"
#include "../support/test_support.hpp"

using namespace funrate;

namespace {

struct Fixture {
    design::DesignMatrix X_basic;
    design::DesignMatrix X_const;
    Eigen::MatrixXd D;
    solver::RatingSet reduced;
    solver::RatingSet full;
};

Fixture fit_pair(std::uint64_t seed, double alpha, double sigma, int n_teams = 10,
                 int games_per_team = 8, int T = 60) {
    synth::SynthConfig cfg;
    cfg.n_teams = n_teams;
    cfg.games_per_team = games_per_team;
    cfg.regulation_s = T;
    cfg.beta_family = synth::BetaFamily::ConstantInt;
    cfg.alpha_mode = alpha == 0.0 ? synth::AlphaMode::Zero : synth::AlphaMode::Shared;
    cfg.alpha_value = alpha;
    cfg.noise = sigma > 0 ? synth::NoiseModel::IidGaussian : synth::NoiseModel::None;
    cfg.noise_sigma = sigma;
    cfg.seed = seed;

    const auto season = synth::generate_season(cfg);
    auto prepared = ingest::prepare(season.games);

    Fixture f;
    f.X_basic = design::build_design(prepared.games, design::ModelKind::Basic);
    f.X_const = design::build_design(prepared.games, design::ModelKind::ConstantHca);
    f.D = solver::stack_tracks(f.X_basic, prepared.tracks);
    f.reduced = solver::fit(f.X_basic, f.D);
    f.full = solver::fit(f.X_const, f.D);
    return f;
}

}  // namespace

TEST_CASE("a fit against itself gives F = 0 and P = 1") {
    auto f = fit_pair(3, 3.0, 5.0);
    const auto res = inference::anova_nested(f.full, f.full);
    CHECK(res.df_num == 0);
    for (int t = 1; t < f.full.grid_len; ++t) {
        CHECK(res.f_curve.values[t] == 0.0);
        CHECK(res.p_curve.values[t] == 1.0);
    }
}

TEST_CASE("equal SSE gives F = 0, P = 1 pointwise") {
    auto f = fit_pair(5, 0.0, 4.0);
    auto full = f.full;
    // force equality at a few seconds
    full.sse[10] = f.reduced.sse[10];
    full.sse[20] = f.reduced.sse[20];
    const auto res = inference::anova_nested(f.reduced, full);
    CHECK(res.f_curve.values[10] == 0.0);
    CHECK(res.p_curve.values[10] == 1.0);
    CHECK(res.f_curve.values[20] == 0.0);
    CHECK(res.p_curve.values[20] == 1.0);
}

TEST_CASE("t = 0 is degenerate: both models fit the level start exactly") {
    using testsupport::make_game;
    // double round robin, every game starting 0-0
    std::vector<ingest::GameRecord> games{
        make_game("g1", "A", "B", false, 20, {{5, 3, 0}, {12, 5, 4}}),
        make_game("g2", "B", "A", false, 20, {{4, 2, 2}, {15, 7, 3}}),
        make_game("g3", "B", "C", false, 20, {{6, 1, 4}}),
        make_game("g4", "C", "B", false, 20, {{3, 2, 0}, {11, 2, 6}}),
        make_game("g5", "C", "A", false, 20, {{8, 4, 4}, {16, 4, 9}}),
        make_game("g6", "A", "C", false, 20, {{2, 3, 1}}),
    };
    auto prepared = ingest::prepare(games);
    const auto Xb = design::build_design(prepared.games, design::ModelKind::Basic);
    const auto Xc = design::build_design(prepared.games, design::ModelKind::ConstantHca);
    const auto D = solver::stack_tracks(Xb, prepared.tracks);
    const auto reduced = solver::fit(Xb, D);
    const auto full = solver::fit(Xc, D);

    CHECK(full.sse[0] == 0.0);
    const auto res = inference::anova_nested(reduced, full);
    REQUIRE(!res.degenerate_seconds.empty());
    CHECK(res.degenerate_seconds.front() == 0);
    CHECK(res.p_curve.values[0] == 1.0);
    CHECK(res.f_curve.values[0] == 0.0);
}

TEST_CASE("degenerate second with remaining reduced error reports P = 0") {
    auto f = fit_pair(9, 3.0, 5.0);
    auto full = f.full;
    full.sse[15] = 0.0;  // hypothetical perfect full fit
    const auto res = inference::anova_nested(f.reduced, full);
    CHECK(std::isinf(res.f_curve.values[15]));
    CHECK(res.p_curve.values[15] == 0.0);
}

TEST_CASE("degrees of freedom come from effective ranks") {
    auto f = fit_pair(11, 3.0, 5.0, 12, 9, 40);
    const auto res = inference::anova_nested(f.reduced, f.full);
    CHECK(res.df_num == 1);  // one extra identified parameter: alpha
    CHECK(res.df_den == f.X_basic.m - f.full.rank);
}

TEST_CASE("non-nested or mismatched fits are rejected") {
    auto f = fit_pair(13, 3.0, 5.0);
    CHECK_THROWS_AS(inference::anova_nested(f.full, f.reduced), Error);

    auto g = fit_pair(13, 3.0, 5.0, 10, 8, 50);  // different grid
    CHECK_THROWS_AS(inference::anova_nested(f.reduced, g.full), DimensionError);
}

TEST_CASE("F is invariant under rescaling all tracks") {
    auto f = fit_pair(17, 3.0, 5.0);
    const auto base = inference::anova_nested(f.reduced, f.full);

    const Eigen::MatrixXd D2 = 3.0 * f.D;
    auto reduced2 = solver::fit(f.X_basic, D2);
    auto full2 = solver::fit(f.X_const, D2);
    const auto scaled = inference::anova_nested(reduced2, full2);

    for (int t = 0; t < base.f_curve.grid_len(); ++t) {
        const double a = base.f_curve.values[t], b = scaled.f_curve.values[t];
        if (std::isinf(a) || std::isinf(b)) {
            CHECK(std::isinf(a) == std::isinf(b));
        } else {
            CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("P is a pointwise transform of F") {
    auto f = fit_pair(19, 0.0, 7.0);
    const auto res = inference::anova_nested(f.reduced, f.full);
    for (int t = 0; t < res.p_curve.grid_len(); ++t) {
        const double p = res.p_curve.values[t];
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(res.f_curve.values[t] >= 0.0);
        if (!std::isinf(res.f_curve.values[t]))
            CHECK(p == doctest::Approx(1.0 - stats::f_cdf(res.f_curve.values[t], res.df_num,
                                                          res.df_den))
                           .epsilon(1e-12));
    }
}

TEST_CASE("summary reports threshold crossings") {
    inference::AnovaResult res;
    res.df_num = 1;
    res.df_den = 50;
    Eigen::VectorXd p(6);
    p << 1.0, 0.05, 0.02, 0.5, 0.01, 0.9;
    res.p_curve = {"P", p, ""};
    res.f_curve = {"F", Eigen::VectorXd::Zero(6), ""};

    const auto s = inference::summarize(res, 0.1);
    CHECK(s.frac_below_threshold == doctest::Approx(3.0 / 6.0));
    CHECK(s.min_p == 0.01);
    CHECK(s.argmin_p == 4);
    CHECK(s.first_below == 1);
    CHECK(s.last_below == 4);
}

TEST_CASE("confidence band collapses on zero-noise data") {
    auto f = fit_pair(21, 3.0, 0.0);
    const auto [lo, hi] = inference::alpha_confidence_band(f.full, f.X_const, 0.8);
    CHECK((hi.values - lo.values).cwiseAbs().maxCoeff() < 1e-9);
    // and the centre is the recovered constant advantage
    CHECK((0.5 * (hi.values + lo.values).array() - 3.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("band width scales like the t critical value times the SE") {
    auto f = fit_pair(23, 3.0, 6.0);
    const auto [lo80, hi80] = inference::alpha_confidence_band(f.full, f.X_const, 0.8);
    const auto [lo95, hi95] = inference::alpha_confidence_band(f.full, f.X_const, 0.95);
    const double c80 = stats::t_quantile(0.9, f.full.dof_resid);
    const double c95 = stats::t_quantile(0.975, f.full.dof_resid);
    for (int t = 1; t < f.full.grid_len; t += 7) {
        const double w80 = hi80.values[t] - lo80.values[t];
        const double w95 = hi95.values[t] - lo95.values[t];
        if (w80 > 0)
            CHECK(w95 / w80 == doctest::Approx(c95 / c80).epsilon(1e-10));
    }
}

TEST_CASE("band requires a home-advantage model and a valid level") {
    auto f = fit_pair(25, 3.0, 5.0);
    CHECK_THROWS_AS(inference::alpha_confidence_band(f.reduced, f.X_basic, 0.8), Error);
    CHECK_THROWS_AS(inference::alpha_confidence_band(f.full, f.X_const, 0.0), Error);
    CHECK_THROWS_AS(inference::alpha_confidence_band(f.full, f.X_const, 1.0), Error);
    CHECK_THROWS_AS(inference::alpha_confidence_band(f.full, f.X_basic, 0.8), DimensionError);
}
