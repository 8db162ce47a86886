#pragma once

#include <span>
#include <string>
#include <vector>

#include "funrate/common.hpp"
#include "funrate/design.hpp"
#include "funrate/ingest.hpp"

namespace funrate::solver {

enum class ConstraintKind {
    SumZero,          // average team rating is the zero function
    PinTeam,          // one team's rating pinned to a constant
    PinAverageScore,  // ratings shifted to the grand-mean score curve
};

const char* constraint_kind_name(ConstraintKind k);

struct Constraint {
    ConstraintKind kind = ConstraintKind::SumZero;
    std::string team;   // PinTeam only
    double value = 0.0; // PinTeam only
    Eigen::VectorXd mean_score_curve;  // PinAverageScore only, length T+1

    static Constraint sum_zero() { return {}; }
    static Constraint pin_team(std::string team, double value = 0.0) {
        Constraint c;
        c.kind = ConstraintKind::PinTeam;
        c.team = std::move(team);
        c.value = value;
        return c;
    }
    static Constraint pin_average_score(Eigen::VectorXd curve) {
        Constraint c;
        c.kind = ConstraintKind::PinAverageScore;
        c.mean_score_curve = std::move(curve);
        return c;
    }
};

/// Wall-clock accounting for the factor-once / solve-many scheme.
struct FitTimers {
    double factor_seconds = 0.0;
    double solve_seconds = 0.0;
    int factorizations = 0;
    long rhs_columns = 0;
};

/// Fitted functional ratings on the per-second grid plus fit diagnostics.
struct RatingSet {
    design::ModelSpec spec;
    Constraint constraint;
    int grid_len = 0;
    int m = 0;

    Eigen::MatrixXd beta;   // n_teams x grid_len
    Eigen::MatrixXd alpha;  // 0 (Basic), 1 (ConstantHca) or n_teams rows

    Eigen::VectorXd sse;    // ||X theta(t) - d(t)||^2 per second
    int rank = 0;           // effective rank of the constrained system
    int dof_resid = 0;      // m - rank
    std::vector<std::string> unidentified;  // zero-column parameters pinned to 0

    /// Diagonal of the unscaled parameter covariance (X~' X~)^+ mapped back
    /// to the full parameter order; NaN for pinned parameters. Multiply by
    /// sigma^2(t) for sampling variances.
    Eigen::VectorXd param_var_unscaled;

    FitTimers timers;

    /// Full parameter stack [beta; alpha], p x grid_len.
    Eigen::MatrixXd theta() const;

    Eigen::RowVectorXd team_curve(const std::string& team) const;
    Eigen::RowVectorXd alpha_curve(const std::string& team = {}) const;
};

struct FitOptions {
    int block_cols = 256;          // RHS columns per solve block
    int threads = 1;               // 0 = hardware concurrency
    bool allow_disconnected = false;
    double rank_tolerance = 1e-10; // relative pivot cutoff
};

/// Stack per-game differential tracks into the m x (T+1) response matrix,
/// rows ordered to match the design matrix rows.
Eigen::MatrixXd stack_tracks(const design::DesignMatrix& X,
                             std::span<const ingest::DifferentialTrack> tracks);

/// Pointwise constrained least squares: one rank-revealing orthogonal
/// factorization of the column-reduced system, reused for all T+1
/// right-hand sides. Sum-to-zero is applied by eliminating one team column
/// per connected component; PinTeam / PinAverageScore are constant shifts
/// of that solution.
RatingSet fit(const design::DesignMatrix& X, const Eigen::MatrixXd& D,
              const Constraint& constraint = {}, const FitOptions& opts = {});

/// r[k][t] = (X theta(t) - d(t))_k.
Eigen::MatrixXd residuals(const design::DesignMatrix& X, const RatingSet& ratings,
                          const Eigen::MatrixXd& D);

}  // namespace funrate::solver
