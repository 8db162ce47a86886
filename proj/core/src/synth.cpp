#include "funrate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <Eigen/Dense>
#include <json.hpp>

#include "funrate/bspline.hpp"

namespace funrate::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kScheduleTag = 0x5c4ed01eULL;
constexpr std::uint64_t kTruthTag = 0x7261757468ULL;
constexpr std::uint64_t kGameTag = 0x67616d65ULL;

// Deterministic stream: standardized mt19937_64 plus explicit transforms,
// so generated files are identical for a fixed seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct GameSlot {
    int home;
    int away;
    bool neutral;
};

std::vector<GameSlot> draw_schedule(const SynthConfig& cfg, Rng& rng) {
    std::vector<GameSlot> slots;
    std::vector<int> order(cfg.n_teams);
    for (int i = 0; i < cfg.n_teams; ++i) order[i] = i;

    for (int round = 0; round < cfg.games_per_team; ++round) {
        rng.shuffle(order);
        int i = 0;
        for (; i + 1 < cfg.n_teams; i += 2)
            slots.push_back({order[i], order[i + 1], rng.uniform() < cfg.neutral_fraction});
        if (i < cfg.n_teams) {
            // odd team count: the leftover hosts a random opponent
            const int opp = order[static_cast<size_t>(rng.below(i))];
            slots.push_back({order[i], opp, rng.uniform() < cfg.neutral_fraction});
        }
    }
    return slots;
}

// Sum-to-zero integer adjustment, spread one unit at a time.
void spread_to_zero_sum(std::vector<long long>& v) {
    long long s = 0;
    for (long long x : v) s += x;
    size_t i = 0;
    while (s > 0) {
        --v[i % v.size()];
        --s;
        ++i;
    }
    while (s < 0) {
        ++v[i % v.size()];
        ++s;
        ++i;
    }
}

Eigen::MatrixXd draw_beta(const SynthConfig& cfg, Rng& rng, int L) {
    const int n = cfg.n_teams;
    const double T = static_cast<double>(L - 1);
    Eigen::MatrixXd beta(n, L);

    switch (cfg.beta_family) {
        case BetaFamily::ConstantInt: {
            std::vector<long long> c(n);
            for (int i = 0; i < n; ++i) c[i] = std::llround(rng.normal() * cfg.beta_scale);
            spread_to_zero_sum(c);
            for (int i = 0; i < n; ++i) beta.row(i).setConstant(static_cast<double>(c[i]));
            return beta;
        }
        case BetaFamily::LinearInt: {
            std::vector<long long> a(n), b(n);
            for (int i = 0; i < n; ++i) a[i] = std::llround(rng.normal() * cfg.beta_scale);
            for (int i = 0; i < n; ++i) b[i] = rng.uniform_int(-2, 2);
            spread_to_zero_sum(a);
            spread_to_zero_sum(b);
            for (int i = 0; i < n; ++i)
                for (int t = 0; t < L; ++t)
                    beta(i, t) = static_cast<double>(a[i]) + static_cast<double>(b[i]) * t;
            return beta;
        }
        case BetaFamily::PiecewiseLinear: {
            const int n_knots = 7;
            Eigen::MatrixXd knots(n, n_knots);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n_knots; ++k) knots(i, k) = rng.normal() * cfg.beta_scale;
            for (int t = 0; t < L; ++t) {
                const double u = (T > 0 ? t / T : 0.0) * (n_knots - 1);
                const int k = std::min(static_cast<int>(u), n_knots - 2);
                const double frac = u - k;
                beta.col(t) = (1.0 - frac) * knots.col(k) + frac * knots.col(k + 1);
            }
            beta.rowwise() -= beta.colwise().mean();
            return beta;
        }
        case BetaFamily::Spline: {
            ratings::BSplineBasis basis(4, 0.0, T, std::max(1.0, T / 6.0));
            Eigen::VectorXd grid(L);
            for (int t = 0; t < L; ++t) grid[t] = t;
            const Eigen::MatrixXd B = basis.collocation(grid);  // L x nb
            Eigen::MatrixXd coeff(n, basis.size());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < basis.size(); ++j) coeff(i, j) = rng.normal() * cfg.beta_scale;
            beta = coeff * B.transpose();
            beta.rowwise() -= beta.colwise().mean();
            return beta;
        }
    }
    throw Error("draw_beta: unknown family");
}

bool lattice_family(BetaFamily f) {
    return f == BetaFamily::ConstantInt || f == BetaFamily::LinearInt;
}

}  // namespace

Season generate_season(const SynthConfig& cfg) {
    if (cfg.n_teams < 2) throw Error("generate_season: need at least two teams");
    if (cfg.games_per_team < 1) throw Error("generate_season: games_per_team must be >= 1");
    if (cfg.regulation_s < 1) throw Error("generate_season: regulation_s must be >= 1");

    const int n = cfg.n_teams;
    const int T = cfg.regulation_s;
    const int L = T + 1;

    std::vector<std::string> team_names(n);
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "T%04d", i + 1);
        team_names[i] = buf;
    }

    const design::ModelKind kind = cfg.alpha_mode == AlphaMode::Zero
                                       ? design::ModelKind::Basic
                                       : (cfg.alpha_mode == AlphaMode::Shared
                                              ? design::ModelKind::ConstantHca
                                              : design::ModelKind::IndividualHca);

    // Schedule: redraw until connected (and identifiable, when requested).
    std::vector<GameSlot> slots;
    std::vector<ingest::GameRecord> games;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 100)
            throw Error("generate_season: could not draw a usable schedule in 100 attempts "
                        "(too few games per team?)");
        Rng rng(splitmix64(cfg.seed ^ (kScheduleTag + attempt)));
        slots = draw_schedule(cfg, rng);

        games.clear();
        games.reserve(slots.size());
        for (size_t k = 0; k < slots.size(); ++k) {
            ingest::GameRecord g;
            char buf[24];
            std::snprintf(buf, sizeof buf, "G%05zu", k + 1);
            g.game_id = buf;
            g.date = "2019-01-01";
            g.home_team = team_names[slots[k].home];
            g.away_team = team_names[slots[k].away];
            g.neutral_site = slots[k].neutral;
            g.regulation_length_s = T;
            games.push_back(std::move(g));
        }

        const auto probe_kind = cfg.require_identifiable.value_or(kind);
        const auto X = design::build_design(games, probe_kind);
        if (!design::check_connectivity(X).is_connected()) continue;
        if (cfg.require_identifiable) {
            const Eigen::MatrixXd dense = Eigen::MatrixXd(X.to_sparse());
            Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
            const auto& sv = svd.singularValues();
            int rank = 0;
            for (int i = 0; i < sv.size(); ++i)
                if (sv[i] > sv[0] * 1e-10) ++rank;
            if (rank != X.spec.param_count() - 1) continue;
        }
        break;
    }

    // Ground truth in the constrained space.
    Rng truth_rng(splitmix64(cfg.seed ^ kTruthTag));
    GroundTruth truth;
    truth.spec.kind = kind;
    truth.spec.n_teams = n;
    truth.spec.teams = team_names;
    for (int i = 0; i < n; ++i) truth.spec.team_index[team_names[i]] = i;

    const int p = truth.spec.param_count();
    truth.theta.setZero(p, L);
    truth.theta.topRows(n) = draw_beta(cfg, truth_rng, L);

    const bool lattice = lattice_family(cfg.beta_family);
    if (cfg.alpha_mode == AlphaMode::Shared) {
        const double a = lattice ? static_cast<double>(std::llround(cfg.alpha_value))
                                 : cfg.alpha_value;
        truth.theta.row(n).setConstant(a);
    } else if (cfg.alpha_mode == AlphaMode::PerTeam) {
        const int hi = std::max(1, static_cast<int>(std::llround(2.0 * cfg.alpha_value)));
        for (int i = 0; i < n; ++i) {
            const double a = lattice ? static_cast<double>(truth_rng.uniform_int(0, hi))
                                     : truth_rng.uniform() * 2.0 * cfg.alpha_value;
            truth.theta.row(n + i).setConstant(a);
        }
    }

    // Per-game differential, rounded, split into monotone score paths.
    for (size_t k = 0; k < slots.size(); ++k) {
        const auto& slot = slots[k];
        Rng rng(splitmix64(cfg.seed ^ (kGameTag + 0x10000ULL * (k + 1))));

        Eigen::VectorXd d = truth.theta.row(slot.home) - truth.theta.row(slot.away);
        if (!slot.neutral) {
            if (kind == design::ModelKind::ConstantHca)
                d += truth.theta.row(n).transpose();
            else if (kind == design::ModelKind::IndividualHca)
                d += truth.theta.row(n + slot.home).transpose();
        }

        if (cfg.noise == NoiseModel::IidGaussian) {
            for (int t = 1; t < L; ++t) d[t] += cfg.noise_sigma * rng.normal();
        } else if (cfg.noise == NoiseModel::RandomWalk) {
            double w = 0.0;
            for (int t = 1; t < L; ++t) {
                w += cfg.noise_sigma * rng.normal();
                d[t] += w;
            }
        }

        auto& g = games[k];
        long long h = std::max(std::llround(d[0]), 0LL);
        long long a = h - std::llround(d[0]);
        if (h != 0 || a != 0)
            g.events.push_back({0, static_cast<int>(h), static_cast<int>(a)});
        long long prev = std::llround(d[0]);
        for (int t = 1; t < L; ++t) {
            const long long cur = std::llround(d[t]);
            const long long delta = cur - prev;
            if (delta > 0)
                h += delta;
            else if (delta < 0)
                a -= delta;
            if (delta != 0)
                g.events.push_back({t, static_cast<int>(h), static_cast<int>(a)});
            prev = cur;
        }
        if (h - a != prev)
            throw Error("generate_season: monotone score split failed for game " + g.game_id);
        g.final_home = static_cast<int>(h);
        g.final_away = static_cast<int>(a);
    }

    return {std::move(games), std::move(truth)};
}

void write_ground_truth_json(std::ostream& out, const GroundTruth& truth) {
    nlohmann::ordered_json j;
    j["model"] = design::model_kind_name(truth.spec.kind);
    j["teams"] = truth.spec.teams;
    j["grid_len"] = truth.theta.cols();
    auto params = nlohmann::ordered_json::array();
    for (int r = 0; r < truth.theta.rows(); ++r) {
        nlohmann::ordered_json row;
        row["param"] = truth.spec.param_name(r);
        row["values"] = std::vector<double>(truth.theta.row(r).begin(),
                                            truth.theta.row(r).end());
        params.push_back(std::move(row));
    }
    j["theta"] = std::move(params);
    out << j.dump() << '\n';
}

}  // namespace funrate::synth
