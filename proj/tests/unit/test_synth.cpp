#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "funrate/solver.hpp"
#include "funrate/synth.hpp"
#include "../support/test_support.hpp"

using namespace funrate;
using namespace funrate::synth;

TEST_CASE("same seed, byte-identical game files") {
    SynthConfig cfg;
    cfg.n_teams = 12;
    cfg.games_per_team = 8;
    cfg.neutral_fraction = 0.2;
    cfg.regulation_s = 120;
    cfg.alpha_mode = AlphaMode::Shared;
    cfg.noise = NoiseModel::RandomWalk;
    cfg.noise_sigma = 0.8;
    cfg.seed = 424242;

    std::ostringstream a, b;
    ingest::write_games_jsonl(a, generate_season(cfg).games);
    ingest::write_games_jsonl(b, generate_season(cfg).games);
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());

    cfg.seed = 424243;
    std::ostringstream c;
    ingest::write_games_jsonl(c, generate_season(cfg).games);
    CHECK(a.str() != c.str());
}

TEST_CASE("generated seasons pass ingest validation with zero repairs") {
    for (auto noise : {NoiseModel::None, NoiseModel::IidGaussian, NoiseModel::RandomWalk}) {
        SynthConfig cfg;
        cfg.n_teams = 8;
        cfg.games_per_team = 6;
        cfg.neutral_fraction = 0.25;
        cfg.regulation_s = 90;
        cfg.noise = noise;
        cfg.noise_sigma = noise == NoiseModel::None ? 0.0 : 3.0;
        cfg.seed = 7;

        const auto season = generate_season(cfg);
        std::ostringstream out;
        ingest::write_games_jsonl(out, season.games);
        std::istringstream in(out.str());
        const auto parsed = ingest::parse_games_jsonl(in, "synth.jsonl");
        CHECK(parsed.ok());
        CHECK(parsed.games.size() == season.games.size());

        auto prepared = ingest::prepare(parsed.games);
        CHECK(prepared.report.repairs.empty());
        CHECK(prepared.report.warnings.empty());
        CHECK(prepared.games.size() == season.games.size());
    }
}

TEST_CASE("events encode monotone score paths matching the rounded differential") {
    SynthConfig cfg;
    cfg.n_teams = 6;
    cfg.games_per_team = 4;
    cfg.regulation_s = 60;
    cfg.noise = NoiseModel::RandomWalk;
    cfg.noise_sigma = 1.2;
    cfg.seed = 99;
    const auto season = generate_season(cfg);
    for (const auto& g : season.games) {
        int prev_h = 0, prev_a = 0;
        for (const auto& e : g.events) {
            CHECK(e.home_score >= prev_h);
            CHECK(e.away_score >= prev_a);
            CHECK(e.home_score + e.away_score > prev_h + prev_a);
            prev_h = e.home_score;
            prev_a = e.away_score;
        }
        CHECK(prev_h == g.final_home);
        CHECK(prev_a == g.final_away);
    }
}

TEST_CASE("zero-noise lattice truth is recovered through the full pipeline") {
    for (auto [family, mode] :
         {std::pair{BetaFamily::ConstantInt, AlphaMode::Zero},
          std::pair{BetaFamily::LinearInt, AlphaMode::Shared},
          std::pair{BetaFamily::ConstantInt, AlphaMode::PerTeam}}) {
        SynthConfig cfg;
        cfg.n_teams = 6;
        cfg.games_per_team = 8;
        cfg.regulation_s = 50;
        cfg.beta_family = family;
        cfg.alpha_mode = mode;
        cfg.alpha_value = 3.0;
        cfg.seed = 1234;
        cfg.require_identifiable = mode == AlphaMode::Zero
                                       ? design::ModelKind::Basic
                                       : (mode == AlphaMode::Shared
                                              ? design::ModelKind::ConstantHca
                                              : design::ModelKind::IndividualHca);

        const auto season = generate_season(cfg);
        auto prepared = ingest::prepare(season.games);
        const auto X = design::build_design(prepared.games, season.truth.spec.kind);
        const auto D = solver::stack_tracks(X, prepared.tracks);
        const auto fit = solver::fit(X, D);
        CHECK((fit.theta() - season.truth.theta).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("ground truth lives in the constrained space") {
    SynthConfig cfg;
    cfg.n_teams = 9;
    cfg.games_per_team = 4;
    cfg.regulation_s = 40;
    cfg.seed = 5;
    for (auto family : {BetaFamily::ConstantInt, BetaFamily::LinearInt,
                        BetaFamily::PiecewiseLinear, BetaFamily::Spline}) {
        cfg.beta_family = family;
        const auto season = generate_season(cfg);
        const auto sums = season.truth.theta.topRows(cfg.n_teams).colwise().sum();
        CHECK(sums.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("iid noise variance matches the configured model") {
    SynthConfig cfg;
    cfg.n_teams = 10;
    cfg.games_per_team = 20;
    cfg.regulation_s = 400;
    cfg.beta_family = BetaFamily::ConstantInt;
    cfg.noise = NoiseModel::IidGaussian;
    cfg.noise_sigma = 8.0;
    cfg.seed = 31337;

    const auto season = generate_season(cfg);
    auto prepared = ingest::prepare(season.games);
    const auto X = design::build_design(prepared.games, design::ModelKind::Basic);
    const auto D = solver::stack_tracks(X, prepared.tracks);

    // residual of the true model: noise plus rounding
    double sum_sq = 0.0;
    long count = 0;
    for (int k = 0; k < X.m; ++k) {
        const auto [hi, ai] = X.row_teams[k];
        const double truth = season.truth.theta(hi, 0) - season.truth.theta(ai, 0);
        for (int t = 1; t < D.cols(); ++t) {
            const double eps = D(k, t) - truth;
            sum_sq += eps * eps;
            ++count;
        }
    }
    const double var = sum_sq / count;
    const double expected = 8.0 * 8.0 + 1.0 / 12.0;  // rounding adds uniform(-1/2,1/2)
    CHECK(std::abs(var - expected) < 0.1 * expected);
}

TEST_CASE("random-walk noise has the configured step variance") {
    SynthConfig cfg;
    cfg.n_teams = 10;
    cfg.games_per_team = 20;
    cfg.regulation_s = 400;
    cfg.beta_family = BetaFamily::ConstantInt;
    cfg.noise = NoiseModel::RandomWalk;
    cfg.noise_sigma = 2.0;
    cfg.seed = 515;

    const auto season = generate_season(cfg);
    auto prepared = ingest::prepare(season.games);
    const auto X = design::build_design(prepared.games, design::ModelKind::Basic);
    const auto D = solver::stack_tracks(X, prepared.tracks);

    // increments of the rounded walk: step variance plus rounding at both ends
    double sum_sq = 0.0;
    long count = 0;
    for (int k = 0; k < X.m; ++k)
        for (int t = 2; t < D.cols(); ++t) {
            const double inc = D(k, t) - D(k, t - 1);
            sum_sq += inc * inc;
            ++count;
        }
    const double var = sum_sq / count;
    const double expected = 4.0 + 2.0 / 12.0;
    CHECK(std::abs(var - expected) < 0.1 * expected);
}

TEST_CASE("schedules are connected and cover every team") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        SynthConfig cfg;
        cfg.n_teams = 15;
        cfg.games_per_team = 3;
        cfg.regulation_s = 20;
        cfg.seed = seed;
        const auto season = generate_season(cfg);
        const auto X = design::build_design(season.games, design::ModelKind::Basic);
        CHECK(X.spec.n_teams == 15);
        CHECK(design::check_connectivity(X).is_connected());
    }
}

TEST_CASE("infeasible configs are rejected") {
    SynthConfig cfg;
    cfg.n_teams = 1;
    CHECK_THROWS_AS(generate_season(cfg), Error);
    cfg.n_teams = 4;
    cfg.games_per_team = 0;
    CHECK_THROWS_AS(generate_season(cfg), Error);
}

TEST_CASE("ground-truth sidecar serializes every parameter") {
    SynthConfig cfg;
    cfg.n_teams = 3;
    cfg.games_per_team = 2;
    cfg.regulation_s = 10;
    cfg.alpha_mode = AlphaMode::Shared;
    cfg.seed = 2;
    const auto season = generate_season(cfg);
    std::ostringstream out;
    write_ground_truth_json(out, season.truth);
    CHECK(out.str().find("\"model\":\"constant_hca\"") != std::string::npos);
    CHECK(out.str().find("beta:T0001") != std::string::npos);
    CHECK(out.str().find("\"alpha\"") != std::string::npos);
}
