#include "portopt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "portopt/rng.hpp"

namespace portopt::reference {

namespace {

// mean and covariance of a list of row indices, divisor = row count
void sample_stats(const Matrix& returns, const std::vector<std::uint32_t>& rows, Vector& mu,
                  Matrix& sigma) {
    const std::size_t n = returns.cols();
    const std::size_t len = rows.size();
    mu.assign(n, 0.0);
    for (std::uint32_t t : rows)
        for (std::size_t i = 0; i < n; ++i) mu[i] += returns(t, i);
    for (std::size_t i = 0; i < n; ++i) mu[i] /= static_cast<double>(len);

    sigma = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) {
            double acc = 0.0;
            for (std::uint32_t t : rows) acc += (returns(t, i) - mu[i]) * (returns(t, k) - mu[k]);
            acc /= static_cast<double>(len);
            sigma(i, k) = acc;
            sigma(k, i) = acc;
        }
}

}  // namespace

IntervalSet moving_window_intervals(const ReturnMatrix& r, std::size_t window) {
    const std::size_t m = r.periods();
    const std::size_t n = r.assets();
    if (window < 1 || window > m)
        throw std::invalid_argument("reference::moving_window_intervals: bad window");
    const std::size_t n_windows = m - window + 1;

    IntervalSet out;
    out.method = UncertaintyMethod::moving_window;
    out.codes = r.codes;
    out.mu_lo.assign(n, std::numeric_limits<double>::infinity());
    out.mu_hi.assign(n, -std::numeric_limits<double>::infinity());
    out.sigma_lo = Matrix(n, n, std::numeric_limits<double>::infinity());
    out.sigma_hi = Matrix(n, n, -std::numeric_limits<double>::infinity());

    Vector mu;
    Matrix sigma;
    std::vector<std::uint32_t> rows(window);
    for (std::size_t w = 0; w < n_windows; ++w) {
        for (std::size_t t = 0; t < window; ++t) rows[t] = static_cast<std::uint32_t>(w + t);
        sample_stats(r.returns, rows, mu, sigma);
        for (std::size_t i = 0; i < n; ++i) {
            out.mu_lo[i] = std::min(out.mu_lo[i], mu[i]);
            out.mu_hi[i] = std::max(out.mu_hi[i], mu[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                out.sigma_lo(i, k) = std::min(out.sigma_lo(i, k), sigma(i, k));
                out.sigma_hi(i, k) = std::max(out.sigma_hi(i, k), sigma(i, k));
            }
    }
    out.meta = MovingWindowMeta{window, n_windows};
    return out;
}

IntervalSet block_bootstrap_intervals(const ReturnMatrix& r, const BootstrapConfig& cfg) {
    const std::size_t m = r.periods();
    const std::size_t n = r.assets();
    if (m < 2) throw std::invalid_argument("reference::bootstrap: need at least 2 return rows");
    if (cfg.n_boot < 2) throw std::invalid_argument("reference::bootstrap: n_boot < 2");

    const BlockPlan plan = bootstrap_block_plan(m, cfg);
    const std::size_t sample_rows = plan.block_len * plan.block_count;

    std::vector<Vector> rep_mu(cfg.n_boot);
    std::vector<Matrix> rep_sigma(cfg.n_boot);
    std::vector<std::uint32_t> rows(sample_rows);
    for (std::size_t rep = 0; rep < cfg.n_boot; ++rep) {
        auto rng = Xoshiro256StarStar::substream(cfg.seed, rep);
        for (std::size_t j = 0; j < sample_rows; ++j)
            rows[j] = static_cast<std::uint32_t>(rng.uniform_index(m));
        sample_stats(r.returns, rows, rep_mu[rep], rep_sigma[rep]);
    }

    const double p_lo = cfg.alpha / 2.0;
    const double p_hi = 1.0 - cfg.alpha / 2.0;

    IntervalSet out;
    out.method = UncertaintyMethod::bootstrap;
    out.codes = r.codes;
    out.mu_lo.resize(n);
    out.mu_hi.resize(n);
    out.sigma_lo = Matrix(n, n);
    out.sigma_hi = Matrix(n, n);

    std::vector<double> column(cfg.n_boot);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t rep = 0; rep < cfg.n_boot; ++rep) column[rep] = rep_mu[rep][i];
        out.mu_lo[i] = percentile(column, p_lo);
        out.mu_hi[i] = percentile(column, p_hi);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) {
            for (std::size_t rep = 0; rep < cfg.n_boot; ++rep) column[rep] = rep_sigma[rep](i, k);
            const double lo = percentile(column, p_lo);
            const double hi = percentile(column, p_hi);
            out.sigma_lo(i, k) = lo;
            out.sigma_lo(k, i) = lo;
            out.sigma_hi(i, k) = hi;
            out.sigma_hi(k, i) = hi;
        }

    BootstrapMeta meta;
    meta.n_boot = cfg.n_boot;
    meta.alpha = cfg.alpha;
    meta.seed = cfg.seed;
    meta.block_len = plan.block_len;
    meta.block_count = plan.block_count;
    meta.sample_rows = sample_rows;
    meta.cube_root_m = plan.cube_root_m;
    meta.block_len_overridden = plan.overridden;
    meta.block_count_rule = cfg.block_count_rule;
    out.meta = meta;
    return out;
}

}  // namespace portopt::reference
