#pragma once

#include "funrate/common.hpp"

namespace funrate::ratings {

/// Clamped B-spline basis on [start, end] with uniform interior knots every
/// `knot_spacing` units. Order = degree + 1 (order 4 = cubic).
class BSplineBasis {
  public:
    BSplineBasis(int order, double start, double end, double knot_spacing);

    int size() const { return n_basis_; }
    int order() const { return order_; }

    /// Non-zero basis values at x: `values[i]` is basis function
    /// `first + i`, i in [0, order).
    void evaluate(double x, int& first, Eigen::VectorXd& values) const;

    /// Dense collocation matrix, one row per evaluation point.
    Eigen::MatrixXd collocation(const Eigen::VectorXd& x) const;

  private:
    int order_;
    int n_basis_;
    Eigen::VectorXd knots_;
};

}  // namespace funrate::ratings
