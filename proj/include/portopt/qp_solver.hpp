#pragma once

#include <limits>

#include "portopt/linalg.hpp"
#include "portopt/robust_model.hpp"

namespace portopt {

struct SolverConfig {
    double tol = 1e-9;            // KKT residual tolerance
    std::size_t max_iter = 100000;
    double psd_eps = 0.0;         // eigenvalue floor for the Hessian repair
    bool record_history = false;  // keep per-iteration objective/residual
};

struct PortfolioSolution {
    Vector weights;
    double f_val = 0.0;
    std::size_t iterations = 0;
    double kkt_residual = std::numeric_limits<double>::infinity();
    double psd_shift = 0.0;  // largest eigenvalue lift applied by the repair
    bool converged = false;
    Vector objective_history;  // filled when SolverConfig::record_history
    Vector residual_history;
};

/// Eigenvalue clipping: eigenvalues below `eps` are lifted to `eps` and the
/// matrix reconstructed. Needed because an elementwise-worst covariance bound
/// need not be PSD. `max_shift`, when given, receives the largest lift.
Matrix nearest_psd(const Matrix& m, double eps, double* max_shift = nullptr);

/// Euclidean projection onto { x >= 0, sum(x) = 1 } (sort-and-threshold).
Vector project_simplex(Vector v);

/// Projected-gradient optimality measure || x - P(x - (Qx + c)) ||_inf.
/// Throws if x is infeasible beyond 1e-8.
double kkt_residual(const QpProblem& p, const Vector& x);

/// Accelerated projected gradient with monotone acceptance and restart,
/// fixed step 1/lambda_max(repaired Q). Returns a certified solution or a
/// diagnostic failure (converged = false) when max_iter is exhausted.
PortfolioSolution solve_qp(const QpProblem& p, const SolverConfig& cfg = {});

}  // namespace portopt
