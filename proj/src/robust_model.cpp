#include "portopt/robust_model.hpp"

#include <stdexcept>

namespace portopt {

QpProblem build_classical_qp(const EstimatePair& est, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("build_classical_qp: gamma must be > 0");
    const std::size_t n = est.mu.size();
    if (est.sigma.rows() != n || est.sigma.cols() != n)
        throw std::invalid_argument("build_classical_qp: mu/sigma dimension mismatch");

    QpProblem p;
    p.label = QpLabel::classical;
    p.gamma = gamma;
    p.q = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) p.q(i, k) = gamma * est.sigma(i, k);
    p.c.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.c[i] = -est.mu[i];
    return p;
}

QpProblem build_robust_qp(const RobustParams& rp, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("build_robust_qp: gamma must be > 0");
    const std::size_t n = rp.mu0.size();
    if (rp.beta.size() != n || rp.sigma0.rows() != n || rp.sigma0.cols() != n ||
        rp.delta.rows() != n || rp.delta.cols() != n)
        throw std::invalid_argument("build_robust_qp: parameter dimension mismatch");

    QpProblem p;
    p.label = QpLabel::robust;
    p.gamma = gamma;
    p.q = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) p.q(i, k) = gamma * (rp.sigma0(i, k) + rp.delta(i, k));
    p.c.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.c[i] = -(rp.mu0[i] - rp.beta[i]);
    return p;
}

double objective_value(const QpProblem& p, const Vector& x) {
    if (x.size() != p.size()) throw std::invalid_argument("objective_value: dimension mismatch");
    return 0.5 * quad_form(p.q, x) + dot(p.c, x);
}

}  // namespace portopt
