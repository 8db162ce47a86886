#include "funrate/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include <Eigen/Dense>

namespace funrate::solver {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Sum-to-zero reparametrization: one team column per connected component is
// eliminated as the negative sum of the component's other teams. Advantage
// columns pass through; exact zero columns are dropped and pinned.
struct Reduction {
    std::vector<int> kept_cols;   // reduced index -> full column
    std::vector<int> reduced_of;  // full column -> reduced index or -1
    std::vector<int> eliminated;  // per component: eliminated team column
    std::vector<std::vector<int>> comp_teams;
    std::vector<int> comp_of_team;
    std::vector<int> zero_cols;   // dropped advantage columns
};

Reduction plan_reduction(const design::DesignMatrix& X, const design::ConnectivityReport& conn) {
    const int n = X.spec.n_teams;
    const int p = X.spec.param_count();

    Reduction red;
    red.comp_of_team = conn.component_of_team;
    red.comp_teams.resize(conn.n_components);
    for (int i = 0; i < n; ++i) red.comp_teams[conn.component_of_team[i]].push_back(i);
    red.eliminated.resize(conn.n_components);
    for (int c = 0; c < conn.n_components; ++c) red.eliminated[c] = red.comp_teams[c].back();

    std::vector<bool> nonzero(p, false);
    for (const auto& e : X.entries) nonzero[e.col()] = true;

    red.reduced_of.assign(p, -1);
    for (int j = 0; j < p; ++j) {
        const bool is_eliminated = j < n && j == red.eliminated[red.comp_of_team[j]];
        if (is_eliminated) continue;
        if (!nonzero[j]) {
            red.zero_cols.push_back(j);
            continue;
        }
        red.reduced_of[j] = static_cast<int>(red.kept_cols.size());
        red.kept_cols.push_back(j);
    }
    return red;
}

Eigen::MatrixXd build_reduced(const design::DesignMatrix& X, const Reduction& red) {
    const int n = X.spec.n_teams;
    Eigen::MatrixXd Xr = Eigen::MatrixXd::Zero(X.m, static_cast<int>(red.kept_cols.size()));
    for (const auto& e : X.entries) {
        const int j = e.col();
        if (j < n && red.reduced_of[j] == -1) {
            // eliminated team: beta_e = -sum of the component's other teams
            for (int l : red.comp_teams[red.comp_of_team[j]]) {
                if (l == j) continue;
                Xr(e.row(), red.reduced_of[l]) -= e.value();
            }
        } else if (red.reduced_of[j] >= 0) {
            Xr(e.row(), red.reduced_of[j]) += e.value();
        }
    }
    return Xr;
}

// Exact p x p Gram of the sparse design, folded through the
// reparametrization; feeds the unscaled parameter covariance diagonal.
Eigen::VectorXd param_variance_diag(const design::DesignMatrix& X, const Reduction& red,
                                    int rank, double rank_tolerance) {
    const int p = X.spec.param_count();
    const int q = static_cast<int>(red.kept_cols.size());
    const int n = X.spec.n_teams;

    std::vector<std::vector<std::pair<int, double>>> rows(X.m);
    for (const auto& e : X.entries) rows[e.row()].emplace_back(e.col(), e.value());

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p, p);
    for (const auto& row : rows)
        for (const auto& [ca, va] : row)
            for (const auto& [cb, vb] : row) G(ca, cb) += va * vb;

    auto elim_of = [&](int full_col) -> int {
        return full_col < n ? red.eliminated[red.comp_of_team[full_col]] : -1;
    };
    Eigen::MatrixXd Gr(q, q);
    for (int a = 0; a < q; ++a) {
        const int ja = red.kept_cols[a];
        const int ea = elim_of(ja);
        for (int b = 0; b < q; ++b) {
            const int jb = red.kept_cols[b];
            const int eb = elim_of(jb);
            double v = G(ja, jb);
            if (ea >= 0) v -= G(ea, jb);
            if (eb >= 0) v -= G(ja, eb);
            if (ea >= 0 && eb >= 0) v += G(ea, eb);
            Gr(a, b) = v;
        }
    }

    Eigen::MatrixXd C;
    if (rank == q) {
        C = Gr.llt().solve(Eigen::MatrixXd::Identity(q, q));
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gr);
        const Eigen::VectorXd& ev = es.eigenvalues();
        const double cutoff = ev.cwiseAbs().maxCoeff() * rank_tolerance * rank_tolerance;
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(q);
        for (int i = 0; i < q; ++i)
            if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
        C = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    }

    Eigen::VectorXd var(p);
    var.setConstant(std::numeric_limits<double>::quiet_NaN());
    for (int a = 0; a < q; ++a) var[red.kept_cols[a]] = C(a, a);
    for (size_t c = 0; c < red.eliminated.size(); ++c) {
        // Var(beta_e) = 1' C_cc 1 over the component's kept columns
        double v = 0.0;
        for (int l : red.comp_teams[c]) {
            if (red.reduced_of[l] < 0) continue;
            for (int l2 : red.comp_teams[c]) {
                if (red.reduced_of[l2] < 0) continue;
                v += C(red.reduced_of[l], red.reduced_of[l2]);
            }
        }
        var[red.eliminated[c]] = v;
    }
    return var;
}

}  // namespace

const char* constraint_kind_name(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::SumZero: return "sum_zero";
        case ConstraintKind::PinTeam: return "pin_team";
        case ConstraintKind::PinAverageScore: return "pin_average_score";
    }
    return "unknown";
}

Eigen::MatrixXd RatingSet::theta() const {
    const int p = spec.param_count();
    Eigen::MatrixXd th(p, grid_len);
    th.topRows(spec.n_teams) = beta;
    if (alpha.rows() > 0) th.bottomRows(alpha.rows()) = alpha;
    return th;
}

Eigen::RowVectorXd RatingSet::team_curve(const std::string& team) const {
    return beta.row(spec.team_of(team));
}

Eigen::RowVectorXd RatingSet::alpha_curve(const std::string& team) const {
    if (spec.kind == design::ModelKind::Basic)
        throw Error("alpha_curve: the basic model has no home-advantage curve");
    if (spec.kind == design::ModelKind::ConstantHca) return alpha.row(0);
    if (team.empty()) throw Error("alpha_curve: individual model needs a team");
    return alpha.row(spec.team_of(team));
}

Eigen::MatrixXd stack_tracks(const design::DesignMatrix& X,
                             std::span<const ingest::DifferentialTrack> tracks) {
    if (static_cast<int>(tracks.size()) != X.m)
        throw DimensionError("stack_tracks: track count does not match design rows");
    std::unordered_map<std::string, const ingest::DifferentialTrack*> by_id;
    for (const auto& t : tracks) by_id[t.game_id] = &t;

    const auto len = tracks.front().d.size();
    Eigen::MatrixXd D(X.m, len);
    for (int k = 0; k < X.m; ++k) {
        auto it = by_id.find(X.row_game[k]);
        if (it == by_id.end())
            throw DimensionError("stack_tracks: no track for game " + X.row_game[k]);
        if (it->second->d.size() != len)
            throw DimensionError("stack_tracks: tracks disagree on grid length");
        D.row(k) = it->second->d.cast<double>().transpose();
    }
    return D;
}

RatingSet fit(const design::DesignMatrix& X, const Eigen::MatrixXd& D,
              const Constraint& constraint, const FitOptions& opts) {
    if (D.rows() != X.m) throw DimensionError("fit: D rows must match design rows");
    if (D.cols() < 1) throw DimensionError("fit: empty time grid");
    const int n = X.spec.n_teams;
    const int p = X.spec.param_count();
    const int L = static_cast<int>(D.cols());

    const auto conn = design::check_connectivity(X);
    if (!conn.is_connected() && !opts.allow_disconnected)
        throw IdentifiabilityError(
            "fit: team graph has " + std::to_string(conn.n_components) +
            " components; ratings are only comparable within a component "
            "(pass allow_disconnected / --per-component to fit anyway)");

    if (constraint.kind == ConstraintKind::PinTeam) X.spec.team_of(constraint.team);
    if (constraint.kind == ConstraintKind::PinAverageScore &&
        constraint.mean_score_curve.size() != L)
        throw DimensionError("fit: PinAverageScore needs a mean score curve on the fit grid");

    const Reduction red = plan_reduction(X, conn);
    const Eigen::MatrixXd Xr = build_reduced(X, red);

    RatingSet out;
    out.spec = X.spec;
    out.constraint = constraint;
    out.grid_len = L;
    out.m = X.m;
    for (int j : red.zero_cols) out.unidentified.push_back(X.spec.param_name(j));

    const auto t_factor = Clock::now();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(opts.rank_tolerance);
    cod.compute(Xr);
    out.timers.factor_seconds = seconds_since(t_factor);
    out.timers.factorizations = 1;
    out.rank = static_cast<int>(cod.rank());
    out.dof_resid = X.m - out.rank;

    const int alpha_rows = X.spec.kind == design::ModelKind::Basic          ? 0
                           : X.spec.kind == design::ModelKind::ConstantHca ? 1
                                                                           : n;
    out.beta.setZero(n, L);
    out.alpha.setZero(alpha_rows, L);
    out.sse.setZero(L);

    const Eigen::SparseMatrix<double> S = X.to_sparse();
    const int block = std::max(1, opts.block_cols);
    const int n_blocks = (L + block - 1) / block;
    int threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n_blocks);

    const auto t_solve = Clock::now();
    std::atomic<int> next_block{0};
    auto worker = [&]() {
        Eigen::MatrixXd theta_block;
        for (;;) {
            const int b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const int c0 = b * block;
            const int len = std::min(block, L - c0);

            const Eigen::MatrixXd phi = cod.solve(D.middleCols(c0, len));

            theta_block.setZero(p, len);
            for (int a = 0; a < static_cast<int>(red.kept_cols.size()); ++a)
                theta_block.row(red.kept_cols[a]) = phi.row(a);
            for (size_t c = 0; c < red.eliminated.size(); ++c) {
                const int e = red.eliminated[c];
                for (int l : red.comp_teams[c]) {
                    if (l == e || red.reduced_of[l] < 0) continue;
                    theta_block.row(e) -= theta_block.row(l);
                }
            }

            out.sse.segment(c0, len) =
                (S * theta_block - D.middleCols(c0, len)).colwise().squaredNorm().transpose();

            out.beta.middleCols(c0, len) = theta_block.topRows(n);
            if (alpha_rows > 0)
                out.alpha.middleCols(c0, len) = theta_block.middleRows(n, alpha_rows);
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    out.timers.solve_seconds = seconds_since(t_solve);
    out.timers.rhs_columns = L;

    // Constraint post-shifts; residuals are unchanged because every game's
    // team coefficients cancel a common within-component shift.
    if (constraint.kind == ConstraintKind::PinTeam) {
        const int tau = X.spec.team_of(constraint.team);
        const Eigen::RowVectorXd shift =
            Eigen::RowVectorXd::Constant(L, constraint.value) - out.beta.row(tau);
        for (int l : red.comp_teams[red.comp_of_team[tau]]) out.beta.row(l) += shift;
    } else if (constraint.kind == ConstraintKind::PinAverageScore) {
        out.beta.rowwise() += constraint.mean_score_curve.transpose();
    }

    out.param_var_unscaled = param_variance_diag(X, red, out.rank, opts.rank_tolerance);
    return out;
}

Eigen::MatrixXd residuals(const design::DesignMatrix& X, const RatingSet& ratings,
                          const Eigen::MatrixXd& D) {
    if (D.rows() != X.m || ratings.grid_len != D.cols() ||
        ratings.spec.param_count() != X.spec.param_count())
        throw DimensionError("residuals: shape mismatch");
    const Eigen::SparseMatrix<double> S = X.to_sparse();
    return S * ratings.theta() - D;
}

}  // namespace funrate::solver
