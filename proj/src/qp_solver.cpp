#include "portopt/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace portopt {

namespace {

// residual of the unit-step fixed-point map, using the supplied Hessian
double residual_inf(const Matrix& q, const Vector& c, const Vector& x) {
    Vector g = matvec(q, x);
    Vector step(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - (g[i] + c[i]);
    Vector projected = project_simplex(std::move(step));
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::fabs(x[i] - projected[i]));
    return worst;
}

double objective(const Matrix& q, const Vector& c, const Vector& x) {
    return 0.5 * quad_form(q, x) + dot(c, x);
}

// f(z) - f(x) = 1/2 (z-x)^T Q (z+x) + c^T (z-x); every term scales with
// ||z-x||, so the sign stays reliable long after the direct difference of two
// objective values has drowned in rounding
double objective_decrease(const Matrix& q, const Vector& c, const Vector& x, const Vector& z) {
    const std::size_t n = x.size();
    Vector d(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = z[i] - x[i];
        s[i] = z[i] + x[i];
    }
    Vector qs = matvec(q, s);
    return 0.5 * dot(d, qs) + dot(c, d);
}

// minimum-norm solution of a symmetric (possibly singular) system via the
// eigendecomposition, dropping numerically-zero eigenvalues
Vector solve_sym_pinv(const Matrix& a, const Vector& b) {
    const std::size_t n = b.size();
    const EigenDecomposition eig = jacobi_eigen_sym(a);
    double lmax = 0.0;
    for (double lambda : eig.values) lmax = std::max(lmax, std::fabs(lambda));
    const double cutoff = 1e-13 * std::max(lmax, 1.0);

    Vector x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(eig.values[k]) <= cutoff) continue;
        double vb = 0.0;
        for (std::size_t i = 0; i < n; ++i) vb += eig.vectors(i, k) * b[i];
        const double coef = vb / eig.values[k];
        for (std::size_t i = 0; i < n; ++i) x[i] += coef * eig.vectors(i, k);
    }
    return x;
}

// Active-set refinement: take the support of the unit-step fixed-point map at
// x, solve the equality-constrained QP on that support exactly, and accept the
// candidate only when the KKT residual certifies it.
bool try_polish(const Matrix& q, const Vector& c, Vector& x, double tol) {
    const std::size_t n = x.size();
    Vector g = matvec(q, x);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] - (g[i] + c[i]);
    const Vector image = project_simplex(std::move(v));

    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i)
        if (image[i] > 0.0) support.push_back(i);
    if (support.empty()) return false;

    // bordered KKT system [Q_FF 1; 1^T 0] (x_F; nu) = (-c_F; 1)
    const std::size_t m = support.size();
    Matrix kkt(m + 1, m + 1, 0.0);
    Vector rhs(m + 1, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) kkt(a, b) = q(support[a], support[b]);
        kkt(a, m) = 1.0;
        kkt(m, a) = 1.0;
        rhs[a] = -c[support[a]];
    }
    rhs[m] = 1.0;

    const Vector sol = solve_sym_pinv(kkt, rhs);
    Vector candidate(n, 0.0);
    double sum = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        if (sol[a] < -1e-12) return false;  // guessed support was too large
        candidate[support[a]] = std::max(sol[a], 0.0);
        sum += candidate[support[a]];
    }
    if (std::fabs(sum - 1.0) > 1e-9) return false;
    for (double& w : candidate) w /= sum;

    if (residual_inf(q, c, candidate) > tol) return false;
    x = std::move(candidate);
    return true;
}

}  // namespace

Matrix nearest_psd(const Matrix& m, double eps, double* max_shift) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("nearest_psd: matrix not square");
    if (max_abs_asymmetry(m) > 1e-9)
        throw std::invalid_argument("nearest_psd: input is not symmetric");

    const Matrix sym = symmetrize(m);
    EigenDecomposition eig = jacobi_eigen_sym(sym);

    double shift = 0.0;
    for (double& lambda : eig.values)
        if (lambda < eps) {
            shift = std::max(shift, eps - lambda);
            lambda = eps;
        }
    if (max_shift) *max_shift = shift;
    if (shift == 0.0) return sym;  // already on the PSD cone, keep input exactly

    Matrix out(n, n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += eig.vectors(r, k) * eig.values[k] * eig.vectors(s, k);
            out(r, s) = acc;
            out(s, r) = acc;
        }
    return out;
}

Vector project_simplex(Vector v) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("project_simplex: empty vector");

    Vector sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double running = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        running += sorted[j];
        const double candidate = (running - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    for (double& x : v) x = std::max(x - theta, 0.0);
    return v;
}

double kkt_residual(const QpProblem& p, const Vector& x) {
    if (x.size() != p.size()) throw std::invalid_argument("kkt_residual: dimension mismatch");
    double sum = 0.0;
    for (double w : x) {
        if (w < -1e-8 || w > 1.0 + 1e-8)
            throw std::invalid_argument("kkt_residual: x outside [0, 1]");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("kkt_residual: weights do not sum to 1");
    return residual_inf(p.q, p.c, x);
}

PortfolioSolution solve_qp(const QpProblem& p, const SolverConfig& cfg) {
    const std::size_t n = p.size();
    if (n == 0) throw std::invalid_argument("solve_qp: empty problem");
    if (p.q.rows() != n || p.q.cols() != n)
        throw std::invalid_argument("solve_qp: Q/c dimension mismatch");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("solve_qp: tol must be > 0");
    if (cfg.max_iter < 1) throw std::invalid_argument("solve_qp: max_iter must be >= 1");

    PortfolioSolution sol;
    const Matrix q = nearest_psd(p.q, cfg.psd_eps, &sol.psd_shift);

    double lipschitz;
    if (n == 1)
        lipschitz = std::fabs(q(0, 0));
    else
        lipschitz = power_iteration_lmax(q, 50, 1e-10);
    lipschitz = std::max(lipschitz, 1e-12);
    const double step = 1.0 / lipschitz;

    Vector x(n, 1.0 / static_cast<double>(n));
    Vector x_prev = x;
    Vector y = x;
    double t = 1.0;

    std::size_t it = 0;
    for (; it < cfg.max_iter; ++it) {
        const double res = residual_inf(q, p.c, x);
        if (cfg.record_history) {
            sol.objective_history.push_back(objective(q, p.c, x));
            sol.residual_history.push_back(res);
        }
        if (res <= cfg.tol) {
            sol.kkt_residual = res;
            sol.converged = true;
            break;
        }

        // periodic exact refinement once the active set has settled
        if (it % 25 == 5 && try_polish(q, p.c, x, cfg.tol)) {
            t = 1.0;
            y = x;
            x_prev = x;
            continue;
        }

        Vector g = matvec(q, y);
        Vector z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = y[i] - step * (g[i] + p.c[i]);
        z = project_simplex(std::move(z));

        if (objective_decrease(q, p.c, x, z) <= 0.0) {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double momentum = (t - 1.0) / t_next;
            x_prev = x;
            x = z;
            for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + momentum * (x[i] - x_prev[i]);
            t = t_next;
        } else {
            // candidate went uphill: restart the momentum from the incumbent
            t = 1.0;
            y = x;
            x_prev = x;
        }
    }

    if (!sol.converged) {
        sol.kkt_residual = residual_inf(q, p.c, x);
        sol.converged = sol.kkt_residual <= cfg.tol;
    }
    sol.iterations = it;
    for (double& w : x) w = std::min(std::max(w, 0.0), 1.0);
    sol.f_val = objective(q, p.c, x);
    sol.weights = std::move(x);
    return sol;
}

}  // namespace portopt
