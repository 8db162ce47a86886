#pragma once

#include <string>
#include <vector>

#include "funrate/bspline.hpp"
#include "funrate/common.hpp"
#include "funrate/design.hpp"
#include "funrate/solver.hpp"

namespace funrate::ratings {

/// Weight function w(t) for the scalar rating integral.
struct WeightSpec {
    enum class Kind { Uniform, LinearIncreasing, EndOfGame, Custom };
    Kind kind = Kind::Uniform;
    std::vector<std::pair<double, double>> table;  // Custom: (second, weight)

    static WeightSpec uniform() { return {}; }
    static WeightSpec linear_increasing() { return {Kind::LinearIncreasing, {}}; }
    static WeightSpec end_of_game() { return {Kind::EndOfGame, {}}; }
    static WeightSpec custom(std::vector<std::pair<double, double>> table) {
        return {Kind::Custom, std::move(table)};
    }

    /// Piecewise-linear lookup for Custom; closed forms otherwise.
    double weight_at(double t) const;
};

/// Least-squares projection of a per-second curve onto the clamped
/// B-spline basis (default: order 4, knots every 60 s), evaluated back on
/// the same grid. Presentation-layer only.
CurveSeries smooth(const CurveSeries& rating, int order = 4, int knot_spacing_s = 60);

/// Weighted time-average: trapezoidal quadrature of w*beta over [0,T]
/// divided by the quadrature of w. EndOfGame evaluates beta(T) exactly.
double scalar_rating(const CurveSeries& rating, const WeightSpec& w);

struct RankEntry {
    std::string team;
    double scalar = 0.0;
    int rank = 0;
    bool tied = false;
};

/// Teams in descending scalar-rating order; exact ties are broken
/// lexicographically and flagged.
std::vector<RankEntry> rank_teams(const solver::RatingSet& fit, const WeightSpec& w);

struct ScheduleSummary {
    std::string team;
    int games_played = 0;
    int home_count = 0;     // non-neutral home games
    int away_count = 0;     // non-neutral away games
    int neutral_count = 0;
    std::vector<std::string> opponents;  // multiset, in game order
};

ScheduleSummary schedule_summary(const design::DesignMatrix& X, const std::string& team);

/// beta_i = avg_diff_i + sos_i, from the ConstantHca normal equations.
struct Decomposition {
    std::string team;
    CurveSeries avg_diff;
    CurveSeries sos;
};

Decomposition decompose(const solver::RatingSet& fit, const design::DesignMatrix& X,
                        const Eigen::MatrixXd& D, const std::string& team);

enum class Venue { Neutral, HomeOfFirst };

/// Expected point differential curve for team_i vs team_j. HomeOfFirst
/// adds alpha(t) (ConstantHca) or alpha_i(t) (IndividualHca); the basic
/// model has no venue effect.
CurveSeries predict(const solver::RatingSet& fit, const std::string& team_i,
                    const std::string& team_j, Venue venue);

}  // namespace funrate::ratings
