#include "funrate/inference.hpp"

#include <cmath>
#include <limits>

#include "funrate/stats.hpp"

namespace funrate::inference {

namespace {

int nesting_level(design::ModelKind k) {
    switch (k) {
        case design::ModelKind::Basic: return 0;
        case design::ModelKind::ConstantHca: return 1;
        case design::ModelKind::IndividualHca: return 2;
    }
    return -1;
}

// An SSE below this is an exact fit up to solver roundoff (points^2 units;
// 1e-12 means no residual reaches a microquarter of a point).
constexpr double kExactFitSse = 1e-12;

}  // namespace

AnovaResult anova_nested(const solver::RatingSet& reduced, const solver::RatingSet& full) {
    if (nesting_level(reduced.spec.kind) > nesting_level(full.spec.kind))
        throw Error("anova_nested: reduced model is not nested in the full model");
    if (reduced.grid_len != full.grid_len)
        throw DimensionError("anova_nested: fits are on different grids");
    if (reduced.m != full.m || reduced.spec.teams != full.spec.teams)
        throw DimensionError("anova_nested: fits are not over the same games");

    const int L = full.grid_len;
    AnovaResult res;
    res.df_num = full.rank - reduced.rank;
    res.df_den = full.dof_resid;
    if (res.df_num < 0) throw Error("anova_nested: full model has lower effective rank");
    if (res.df_den < 1)
        throw Error("anova_nested: no residual degrees of freedom (m <= rank)");

    res.f_curve = {"F", Eigen::VectorXd::Zero(L), ""};
    res.p_curve = {"P", Eigen::VectorXd::Ones(L), ""};

    for (int t = 0; t < L; ++t) {
        const double sse_f = full.sse[t];
        const double sse_r = reduced.sse[t];
        if (sse_f <= kExactFitSse) {
            res.degenerate_seconds.push_back(t);
            if (sse_r <= kExactFitSse) {
                res.f_curve.values[t] = 0.0;
                res.p_curve.values[t] = 1.0;
            } else {
                res.f_curve.values[t] = std::numeric_limits<double>::infinity();
                res.p_curve.values[t] = 0.0;
            }
            continue;
        }
        if (res.df_num == 0) continue;  // identical models: F = 0, P = 1
        const double delta = std::max(sse_r - sse_f, 0.0);
        const double f = (delta / res.df_num) / (sse_f / res.df_den);
        res.f_curve.values[t] = f;
        res.p_curve.values[t] = 1.0 - stats::f_cdf(f, res.df_num, res.df_den);
    }
    return res;
}

AnovaSummary summarize(const AnovaResult& result, double threshold) {
    AnovaSummary s;
    s.df_num = result.df_num;
    s.df_den = result.df_den;
    s.threshold = threshold;
    s.degenerate_count = static_cast<int>(result.degenerate_seconds.size());

    const auto& p = result.p_curve.values;
    const int L = static_cast<int>(p.size());
    int below = 0;
    s.min_p = 1.0;
    s.argmin_p = 0;
    for (int t = 0; t < L; ++t) {
        if (p[t] < threshold) {
            ++below;
            if (s.first_below < 0) s.first_below = t;
            s.last_below = t;
        }
        if (p[t] < s.min_p) {
            s.min_p = p[t];
            s.argmin_p = t;
        }
    }
    s.frac_below_threshold = L > 0 ? static_cast<double>(below) / L : 0.0;
    return s;
}

std::pair<CurveSeries, CurveSeries> alpha_confidence_band(const solver::RatingSet& fit,
                                                          const design::DesignMatrix& X,
                                                          double level,
                                                          const std::string& team) {
    if (fit.spec.kind == design::ModelKind::Basic)
        throw Error("alpha_confidence_band: the basic model has no home-advantage curve");
    if (!(level > 0.0 && level < 1.0))
        throw Error("alpha_confidence_band: level must lie in (0,1)");
    if (X.m != fit.m || X.spec.param_count() != fit.spec.param_count())
        throw DimensionError("alpha_confidence_band: design does not match the fit");
    if (fit.dof_resid < 1)
        throw Error("alpha_confidence_band: no residual degrees of freedom");

    const int n = fit.spec.n_teams;
    int param;
    Eigen::RowVectorXd center;
    if (fit.spec.kind == design::ModelKind::ConstantHca) {
        param = n;
        center = fit.alpha.row(0);
    } else {
        if (team.empty())
            throw Error("alpha_confidence_band: individual model needs a team");
        param = n + fit.spec.team_of(team);
        center = fit.alpha.row(fit.spec.team_of(team));
    }

    const double v_alpha = fit.param_var_unscaled[param];
    if (!std::isfinite(v_alpha))
        throw IdentifiabilityError("alpha_confidence_band: alpha parameter '" +
                                   fit.spec.param_name(param) + "' is unidentified");

    const double crit = stats::t_quantile(0.5 * (1.0 + level), fit.dof_resid);
    Eigen::VectorXd half(fit.grid_len);
    for (int t = 0; t < fit.grid_len; ++t) {
        const double sigma2 = std::max(fit.sse[t], 0.0) / fit.dof_resid;
        half[t] = crit * std::sqrt(sigma2 * v_alpha);
    }

    CurveSeries lower{"alpha_lower_pointwise_t", center.transpose() - half, "points"};
    CurveSeries upper{"alpha_upper_pointwise_t", center.transpose() + half, "points"};
    return {std::move(lower), std::move(upper)};
}

}  // namespace funrate::inference
