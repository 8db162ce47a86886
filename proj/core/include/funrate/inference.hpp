#pragma once

#include <utility>
#include <vector>

#include "funrate/common.hpp"
#include "funrate/design.hpp"
#include "funrate/solver.hpp"

namespace funrate::inference {

/// Per-second nested-model F test. Seconds where the full model fits
/// exactly (SSE_f = 0) are flagged degenerate: P is 0 when the reduced
/// model still has error, 1 when both models fit exactly.
struct AnovaResult {
    CurveSeries f_curve;
    CurveSeries p_curve;
    int df_num = 0;
    int df_den = 0;
    std::vector<int> degenerate_seconds;
};

/// F(t) = [(SSE_r - SSE_f)/df_num] / [SSE_f/df_den] with effective ranks as
/// degrees of freedom. The reduced model must be nested in the full one
/// (Basic < ConstantHca < IndividualHca) over the same games and grid.
AnovaResult anova_nested(const solver::RatingSet& reduced, const solver::RatingSet& full);

struct AnovaSummary {
    int df_num = 0;
    int df_den = 0;
    double threshold = 0.1;
    double frac_below_threshold = 0.0;
    double min_p = 1.0;
    int argmin_p = 0;
    int first_below = -1;  // seconds; -1 when the curve never crosses
    int last_below = -1;
    int degenerate_count = 0;
};

AnovaSummary summarize(const AnovaResult& result, double threshold);

/// Pointwise Wald band with a t critical value:
/// alpha_hat(t) +- t_{(1+level)/2, df} * sqrt(SSE(t)/df * v_alpha).
/// v_alpha is the alpha parameter's diagonal entry of the constrained
/// inverse Gram, computed once at fit time. For IndividualHca fits, `team`
/// selects which alpha_i.
std::pair<CurveSeries, CurveSeries> alpha_confidence_band(const solver::RatingSet& fit,
                                                          const design::DesignMatrix& X,
                                                          double level,
                                                          const std::string& team = {});

}  // namespace funrate::inference
