#pragma once

#include <cstdint>

#include "portopt/linalg.hpp"
#include "portopt/market_data.hpp"

namespace portopt {

struct EstimatePair {
    Vector mu;     // length n, mean daily return per asset
    Matrix sigma;  // n x n covariance, divisor m (population form)
};

/// mu[i] = (1/m) * sum_t returns(t, i). Throws on an empty matrix.
Vector mean_vector(const ReturnMatrix& r);

/// sigma[i][j] = (1/m) * sum_t (r(t,i)-mu[i])(r(t,j)-mu[j]).
/// Two-pass, divisor m. `mu` must be mean_vector(r).
Matrix covariance_matrix(const ReturnMatrix& r, const Vector& mu);

EstimatePair estimate(const ReturnMatrix& r);

namespace detail {

// Shared accumulation kernels. Sums always run over rows in ascending draw
// order and scale by `/ len`; the serial reference and the parallel callers
// must keep this order so their outputs compare bitwise in tests.

void mean_rows(const Matrix& r, std::size_t t0, std::size_t len, double* mu);

void cov_rows(const Matrix& r, std::size_t t0, std::size_t len, const double* mu, double* sigma);

void mean_gather(const Matrix& r, const std::uint32_t* idx, std::size_t len, double* mu);

void cov_gather(const Matrix& r, const std::uint32_t* idx, std::size_t len, const double* mu,
                double* sigma);

}  // namespace detail

}  // namespace portopt
