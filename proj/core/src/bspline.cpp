#include "funrate/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace funrate::ratings {

BSplineBasis::BSplineBasis(int order, double start, double end, double knot_spacing)
    : order_(order) {
    if (order < 1) throw Error("BSplineBasis: order must be >= 1");
    if (!(end > start)) throw Error("BSplineBasis: empty domain");
    if (!(knot_spacing > 0)) throw Error("BSplineBasis: knot spacing must be positive");

    std::vector<double> interior;
    for (double x = start + knot_spacing; x < end - 1e-9; x += knot_spacing)
        interior.push_back(x);

    const int n_knots = 2 * order + static_cast<int>(interior.size());
    knots_.resize(n_knots);
    for (int i = 0; i < order; ++i) knots_[i] = start;
    for (size_t i = 0; i < interior.size(); ++i) knots_[order + static_cast<int>(i)] = interior[i];
    for (int i = 0; i < order; ++i) knots_[n_knots - order + i] = end;
    n_basis_ = n_knots - order;
}

void BSplineBasis::evaluate(double x, int& first, Eigen::VectorXd& values) const {
    const int k = order_;
    const int n_k = static_cast<int>(knots_.size());
    const double lo = knots_[k - 1], hi = knots_[n_k - k];
    x = std::clamp(x, lo, hi);

    // Knot span index i with knots[i] <= x < knots[i+1] (right-closed at the end).
    int i;
    if (x >= hi) {
        i = n_k - k - 1;
    } else {
        i = static_cast<int>(std::distance(
                knots_.data(),
                std::upper_bound(knots_.data() + k - 1, knots_.data() + n_k - k, x))) - 1;
    }
    first = i - k + 1;

    // Cox-de Boor triangular scheme over the k non-zero functions.
    values.resize(k);
    values[0] = 1.0;
    std::vector<double> left(k), right(k);
    for (int j = 1; j < k; ++j) {
        left[j] = x - knots_[i + 1 - j];
        right[j] = knots_[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = values[r] / (right[r + 1] + left[j - r]);
            values[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        values[j] = saved;
    }
}

Eigen::MatrixXd BSplineBasis::collocation(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(x.size(), n_basis_);
    Eigen::VectorXd vals;
    int first;
    for (int r = 0; r < x.size(); ++r) {
        evaluate(x[r], first, vals);
        for (int j = 0; j < order_; ++j) B(r, first + j) = vals[j];
    }
    return B;
}

}  // namespace funrate::ratings
