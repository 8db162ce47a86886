#include "funrate/ratings.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace funrate::ratings {

double WeightSpec::weight_at(double t) const {
    switch (kind) {
        case Kind::Uniform: return 1.0;
        case Kind::LinearIncreasing: return t;
        case Kind::EndOfGame: return 0.0;  // handled as exact evaluation at T
        case Kind::Custom: break;
    }
    if (table.empty()) throw Error("WeightSpec: empty custom table");
    if (t <= table.front().first) return table.front().second;
    if (t >= table.back().first) return table.back().second;
    auto hi = std::upper_bound(table.begin(), table.end(), t,
                               [](double v, const auto& row) { return v < row.first; });
    auto lo = hi - 1;
    const double span = hi->first - lo->first;
    if (span <= 0) return lo->second;
    const double u = (t - lo->first) / span;
    return lo->second + u * (hi->second - lo->second);
}

CurveSeries smooth(const CurveSeries& rating, int order, int knot_spacing_s) {
    const int L = rating.grid_len();
    if (L < 2) throw Error("smooth: curve too short");
    const double T = static_cast<double>(L - 1);

    BSplineBasis basis(order, 0.0, T, static_cast<double>(knot_spacing_s));
    if (L < basis.size())
        throw Error("smooth: grid of " + std::to_string(L) + " samples cannot support " +
                    std::to_string(basis.size()) + " basis functions");

    Eigen::VectorXd grid(L);
    for (int t = 0; t < L; ++t) grid[t] = t;
    const Eigen::MatrixXd B = basis.collocation(grid);
    const Eigen::VectorXd coeff = B.householderQr().solve(rating.values);

    CurveSeries out;
    out.name = rating.name.empty() ? "smoothed" : rating.name + "_smoothed";
    out.units = rating.units;
    out.values = B * coeff;
    return out;
}

double scalar_rating(const CurveSeries& rating, const WeightSpec& w) {
    const int L = rating.grid_len();
    if (L < 1) throw Error("scalar_rating: empty curve");
    if (w.kind == WeightSpec::Kind::EndOfGame) return rating.values[L - 1];
    if (L < 2) return rating.values[0];

    if (w.kind == WeightSpec::Kind::Custom) {
        for (const auto& [t, v] : w.table)
            if (v < 0) throw Error("scalar_rating: weights must be non-negative");
    }

    double num = 0.0, den = 0.0;
    double w_prev = w.weight_at(0.0);
    double f_prev = w_prev * rating.values[0];
    for (int t = 1; t < L; ++t) {
        const double w_t = w.weight_at(static_cast<double>(t));
        const double f_t = w_t * rating.values[t];
        num += 0.5 * (f_prev + f_t);
        den += 0.5 * (w_prev + w_t);
        w_prev = w_t;
        f_prev = f_t;
    }
    if (den <= 0.0) throw Error("scalar_rating: total weight is zero");
    return num / den;
}

std::vector<RankEntry> rank_teams(const solver::RatingSet& fit, const WeightSpec& w) {
    std::vector<RankEntry> entries;
    entries.reserve(fit.spec.n_teams);
    for (int i = 0; i < fit.spec.n_teams; ++i) {
        CurveSeries curve{fit.spec.teams[i], fit.beta.row(i).transpose(), "points"};
        entries.push_back({fit.spec.teams[i], scalar_rating(curve, w), 0, false});
    }
    std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.scalar != b.scalar) return a.scalar > b.scalar;
        return a.team < b.team;
    });
    for (size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<int>(i) + 1;
        const bool tie_prev = i > 0 && entries[i - 1].scalar == entries[i].scalar;
        const bool tie_next = i + 1 < entries.size() && entries[i + 1].scalar == entries[i].scalar;
        entries[i].tied = tie_prev || tie_next;
    }
    return entries;
}

ScheduleSummary schedule_summary(const design::DesignMatrix& X, const std::string& team) {
    const int idx = X.spec.team_of(team);
    ScheduleSummary s;
    s.team = team;
    for (int k = 0; k < X.m; ++k) {
        const auto [h, a] = X.row_teams[k];
        if (h != idx && a != idx) continue;
        ++s.games_played;
        s.opponents.push_back(X.spec.teams[h == idx ? a : h]);
        if (X.row_neutral[k])
            ++s.neutral_count;
        else if (h == idx)
            ++s.home_count;
        else
            ++s.away_count;
    }
    return s;
}

Decomposition decompose(const solver::RatingSet& fit, const design::DesignMatrix& X,
                        const Eigen::MatrixXd& D, const std::string& team) {
    if (fit.spec.kind != design::ModelKind::ConstantHca)
        throw Error("decompose: the average-differential/SOS split is defined for the "
                    "constant home-advantage model only");
    if (D.rows() != X.m || D.cols() != fit.grid_len)
        throw DimensionError("decompose: track matrix does not match the fit");

    const int idx = X.spec.team_of(team);
    const int L = fit.grid_len;

    Eigen::VectorXd avg = Eigen::VectorXd::Zero(L);
    Eigen::VectorXd opp_sum = Eigen::VectorXd::Zero(L);
    int m_i = 0, h_i = 0, a_i = 0;
    for (int k = 0; k < X.m; ++k) {
        const auto [h, a] = X.row_teams[k];
        if (h != idx && a != idx) continue;
        ++m_i;
        const double sign = (h == idx) ? 1.0 : -1.0;
        avg += sign * D.row(k).transpose();
        opp_sum += fit.beta.row(h == idx ? a : h).transpose();
        if (!X.row_neutral[k]) {
            if (h == idx)
                ++h_i;
            else
                ++a_i;
        }
    }
    if (m_i == 0) throw Error("decompose: team '" + team + "' played zero games");

    avg /= m_i;
    Eigen::VectorXd sos = opp_sum / m_i;
    const Eigen::VectorXd alpha = fit.alpha.row(0).transpose();
    sos += (static_cast<double>(a_i - h_i) / m_i) * alpha;

    Decomposition dec;
    dec.team = team;
    dec.avg_diff = {"avg_diff:" + team, std::move(avg), "points"};
    dec.sos = {"sos:" + team, std::move(sos), "points"};
    return dec;
}

CurveSeries predict(const solver::RatingSet& fit, const std::string& team_i,
                    const std::string& team_j, Venue venue) {
    const int i = fit.spec.team_of(team_i);
    const int j = fit.spec.team_of(team_j);

    Eigen::VectorXd values = (fit.beta.row(i) - fit.beta.row(j)).transpose();
    if (venue == Venue::HomeOfFirst) {
        if (fit.spec.kind == design::ModelKind::ConstantHca)
            values += fit.alpha.row(0).transpose();
        else if (fit.spec.kind == design::ModelKind::IndividualHca)
            values += fit.alpha.row(i).transpose();
        // Basic: the model carries no venue effect
    }

    CurveSeries out;
    out.name = "predict:" + team_i + "_vs_" + team_j +
               (venue == Venue::Neutral ? "@neutral" : "@home_of_" + team_i);
    out.units = "points";
    out.values = std::move(values);
    return out;
}

}  // namespace funrate::ratings
