#include "portopt/estimation.hpp"

#include <cstring>
#include <stdexcept>

namespace portopt {

namespace detail {

void mean_rows(const Matrix& r, std::size_t t0, std::size_t len, double* mu) {
    const std::size_t n = r.cols();
    std::memset(mu, 0, n * sizeof(double));
    for (std::size_t t = t0; t < t0 + len; ++t) {
        const double* row = r.row(t);
        for (std::size_t i = 0; i < n; ++i) mu[i] += row[i];
    }
    for (std::size_t i = 0; i < n; ++i) mu[i] /= static_cast<double>(len);
}

void cov_rows(const Matrix& r, std::size_t t0, std::size_t len, const double* mu, double* sigma) {
    const std::size_t n = r.cols();
    std::memset(sigma, 0, n * n * sizeof(double));
    std::vector<double> d(n);
    for (std::size_t t = t0; t < t0 + len; ++t) {
        const double* row = r.row(t);
        for (std::size_t i = 0; i < n; ++i) d[i] = row[i] - mu[i];
        for (std::size_t i = 0; i < n; ++i) {
            double* si = sigma + i * n;
            const double di = d[i];
            for (std::size_t k = i; k < n; ++k) si[k] += di * d[k];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) {
            const double v = sigma[i * n + k] / static_cast<double>(len);
            sigma[i * n + k] = v;
            sigma[k * n + i] = v;
        }
}

void mean_gather(const Matrix& r, const std::uint32_t* idx, std::size_t len, double* mu) {
    const std::size_t n = r.cols();
    std::memset(mu, 0, n * sizeof(double));
    for (std::size_t t = 0; t < len; ++t) {
        const double* row = r.row(idx[t]);
        for (std::size_t i = 0; i < n; ++i) mu[i] += row[i];
    }
    for (std::size_t i = 0; i < n; ++i) mu[i] /= static_cast<double>(len);
}

void cov_gather(const Matrix& r, const std::uint32_t* idx, std::size_t len, const double* mu,
                double* sigma) {
    const std::size_t n = r.cols();
    std::memset(sigma, 0, n * n * sizeof(double));
    std::vector<double> d(n);
    for (std::size_t t = 0; t < len; ++t) {
        const double* row = r.row(idx[t]);
        for (std::size_t i = 0; i < n; ++i) d[i] = row[i] - mu[i];
        for (std::size_t i = 0; i < n; ++i) {
            double* si = sigma + i * n;
            const double di = d[i];
            for (std::size_t k = i; k < n; ++k) si[k] += di * d[k];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) {
            const double v = sigma[i * n + k] / static_cast<double>(len);
            sigma[i * n + k] = v;
            sigma[k * n + i] = v;
        }
}

}  // namespace detail

Vector mean_vector(const ReturnMatrix& r) {
    if (r.returns.rows() == 0 || r.returns.cols() == 0)
        throw std::invalid_argument("mean_vector: empty return matrix");
    Vector mu(r.assets());
    detail::mean_rows(r.returns, 0, r.periods(), mu.data());
    return mu;
}

Matrix covariance_matrix(const ReturnMatrix& r, const Vector& mu) {
    if (r.returns.rows() == 0 || r.returns.cols() == 0)
        throw std::invalid_argument("covariance_matrix: empty return matrix");
    if (mu.size() != r.assets())
        throw std::invalid_argument("covariance_matrix: mu dimension mismatch");
    Matrix sigma(r.assets(), r.assets());
    detail::cov_rows(r.returns, 0, r.periods(), mu.data(), sigma.data());
    return sigma;
}

EstimatePair estimate(const ReturnMatrix& r) {
    EstimatePair est;
    est.mu = mean_vector(r);
    est.sigma = covariance_matrix(r, est.mu);
    return est;
}

}  // namespace portopt
