#include <benchmark/benchmark.h>

#include "funrate/design.hpp"
#include "funrate/ratings.hpp"
#include "funrate/solver.hpp"
#include "funrate/stats.hpp"
#include "funrate/synth.hpp"

using namespace funrate;

namespace {

struct Season {
    design::DesignMatrix X;
    Eigen::MatrixXd D;
};

Season build_season(int teams, int games_per_team, int T) {
    synth::SynthConfig cfg;
    cfg.n_teams = teams;
    cfg.games_per_team = games_per_team;
    cfg.regulation_s = T;
    cfg.alpha_mode = synth::AlphaMode::Shared;
    cfg.alpha_value = 3.0;
    cfg.noise = synth::NoiseModel::RandomWalk;
    cfg.noise_sigma = 0.5;
    cfg.seed = 1;
    const auto season = synth::generate_season(cfg);
    auto prepared = ingest::prepare(season.games);
    Season out{design::build_design(prepared.games, design::ModelKind::ConstantHca), {}};
    out.D = solver::stack_tracks(out.X, prepared.tracks);
    return out;
}

}  // namespace

static void BM_FitConstantHca(benchmark::State& state) {
    const int teams = static_cast<int>(state.range(0));
    const auto season = build_season(teams, 16, 600);
    for (auto _ : state) {
        auto fit = solver::fit(season.X, season.D);
        benchmark::DoNotOptimize(fit.beta.data());
    }
    state.SetLabel(std::to_string(season.X.m) + " games x 601 seconds");
}
BENCHMARK(BM_FitConstantHca)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_FactorOnlyVsSolves(benchmark::State& state) {
    // one factorization amortized over all right-hand sides
    const auto season = build_season(64, 16, 2400);
    for (auto _ : state) {
        auto fit = solver::fit(season.X, season.D);
        benchmark::DoNotOptimize(fit.sse.data());
    }
    state.SetLabel("2401 rhs columns, single factorization");
}
BENCHMARK(BM_FactorOnlyVsSolves)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_Resample(benchmark::State& state) {
    synth::SynthConfig cfg;
    cfg.n_teams = 16;
    cfg.games_per_team = 8;
    cfg.regulation_s = 2400;
    cfg.noise = synth::NoiseModel::RandomWalk;
    cfg.noise_sigma = 0.6;
    cfg.seed = 3;
    const auto season = synth::generate_season(cfg);
    for (auto _ : state) {
        for (const auto& g : season.games) {
            auto track = ingest::resample(g);
            benchmark::DoNotOptimize(track.d.data());
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(season.games.size()));
}
BENCHMARK(BM_Resample)->Unit(benchmark::kMillisecond);

static void BM_SmoothCurve(benchmark::State& state) {
    Eigen::VectorXd y(2401);
    for (int t = 0; t < y.size(); ++t) y[t] = std::sin(t / 300.0) * 8.0 + 0.002 * t;
    const CurveSeries curve{"bench", y, "points"};
    for (auto _ : state) {
        auto s = ratings::smooth(curve);
        benchmark::DoNotOptimize(s.values.data());
    }
}
BENCHMARK(BM_SmoothCurve)->Unit(benchmark::kMillisecond);

static void BM_FCdf(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::f_cdf(x, 1, 5000));
        x = x < 50.0 ? x + 0.1 : 0.1;
    }
}
BENCHMARK(BM_FCdf);

BENCHMARK_MAIN();
