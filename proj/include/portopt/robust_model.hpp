#pragma once

#include <string>

#include "portopt/estimation.hpp"
#include "portopt/linalg.hpp"
#include "portopt/uncertainty.hpp"

namespace portopt {

enum class QpLabel { classical, robust };

/// Minimization-form QP over the unit simplex with box bounds:
///   minimize f(x) = 1/2 x^T Q x + c^T x   s.t.  sum(x) = 1, 0 <= x_i <= 1.
struct QpProblem {
    QpLabel label = QpLabel::classical;
    double gamma = 0.0;  // record-keeping; already folded into Q
    Matrix q;
    Vector c;

    std::size_t size() const { return c.size(); }
};

/// Classical mean-variance trade-off: Q = gamma * sigma, c = -mu.
QpProblem build_classical_qp(const EstimatePair& est, double gamma);

/// Worst-case trade-off over the interval uncertainty set:
/// Q = gamma * (sigma0 + delta), c = -(mu0 - beta). Valid because x >= 0 makes
/// mu0 - beta the inner minimum over the mean intervals and sigma0 + delta the
/// elementwise-worst covariance.
QpProblem build_robust_qp(const RobustParams& rp, double gamma);

/// 1/2 x^T Q x + c^T x.
double objective_value(const QpProblem& p, const Vector& x);

}  // namespace portopt
