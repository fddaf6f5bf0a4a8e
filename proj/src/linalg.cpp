#include "portopt/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace portopt {

Matrix identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ri = a.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += ri[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double quad_form(const Matrix& a, const Vector& x) {
    Vector ax = matvec(a, x);
    return dot(x, ax);
}

double max_abs_asymmetry(const Matrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
    return worst;
}

Matrix symmetrize(const Matrix& a) {
    Matrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

EigenDecomposition jacobi_eigen_sym(Matrix a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("jacobi_eigen_sym: matrix not square");
    Matrix v = identity(n);
    if (n <= 1) {
        EigenDecomposition out;
        out.values = n == 1 ? Vector{a(0, 0)} : Vector{};
        out.vectors = v;
        return out;
    }

    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
    frob = std::sqrt(frob);
    const double stop = 1e-15 * (frob > 0.0 ? frob : 1.0);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(2.0 * off) <= stop) break;

        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                // smaller-magnitude root of t^2 + 2*tau*t - 1 = 0
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenDecomposition out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    out.vectors = std::move(v);
    return out;
}

double power_iteration_lmax(const Matrix& a, int max_iter, double tol) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("power_iteration_lmax: matrix not square");
    if (n == 0) return 0.0;

    // fixed start vector; mild per-index variation avoids starting orthogonal
    // to the dominant eigenvector on structured inputs
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 8);
    double nrm = std::sqrt(dot(v, v));
    for (double& x : v) x /= nrm;

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = matvec(a, v);
        const double wn = std::sqrt(dot(w, w));
        if (wn == 0.0) return 0.0;
        for (double& x : w) x /= wn;
        const double next = quad_form(a, w);
        v = std::move(w);
        if (std::fabs(next - lambda) <= tol * std::max(1.0, std::fabs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

}  // namespace portopt
