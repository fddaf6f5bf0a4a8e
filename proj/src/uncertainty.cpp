#include "portopt/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "portopt/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace portopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t integer_cube_root(std::size_t m) {
    auto cube = [](std::size_t v) { return v * v * v; };
    std::size_t r = static_cast<std::size_t>(std::cbrt(static_cast<double>(m)));
    while (r > 0 && cube(r) > m) --r;
    while (cube(r + 1) <= m) ++r;
    return r;
}

struct MinMaxAccum {
    Vector mu_lo, mu_hi;
    Vector sig_lo, sig_hi;  // n*n, row-major

    explicit MinMaxAccum(std::size_t n)
        : mu_lo(n, kInf), mu_hi(n, -kInf), sig_lo(n * n, kInf), sig_hi(n * n, -kInf) {}

    void fold(const double* mu, const double* sigma, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            mu_lo[i] = std::min(mu_lo[i], mu[i]);
            mu_hi[i] = std::max(mu_hi[i], mu[i]);
        }
        for (std::size_t e = 0; e < n * n; ++e) {
            sig_lo[e] = std::min(sig_lo[e], sigma[e]);
            sig_hi[e] = std::max(sig_hi[e], sigma[e]);
        }
    }

    // min/max merging is order-independent, so the parallel merge is exact
    void merge(const MinMaxAccum& other) {
        for (std::size_t i = 0; i < mu_lo.size(); ++i) {
            mu_lo[i] = std::min(mu_lo[i], other.mu_lo[i]);
            mu_hi[i] = std::max(mu_hi[i], other.mu_hi[i]);
        }
        for (std::size_t e = 0; e < sig_lo.size(); ++e) {
            sig_lo[e] = std::min(sig_lo[e], other.sig_lo[e]);
            sig_hi[e] = std::max(sig_hi[e], other.sig_hi[e]);
        }
    }
};

}  // namespace

BlockPlan bootstrap_block_plan(std::size_t m, const BootstrapConfig& cfg) {
    BlockPlan plan;
    plan.cube_root_m = std::cbrt(static_cast<double>(m));
    if (cfg.block_len_override) {
        plan.block_len = *cfg.block_len_override;
        plan.overridden = true;
    } else {
        plan.block_len = integer_cube_root(m);
    }
    if (plan.block_len < 1 || plan.block_len > m)
        throw std::invalid_argument("bootstrap: block length out of range [1, m]");
    switch (cfg.block_count_rule) {
        case BlockCountRule::floor_rule:
            plan.block_count = m / plan.block_len;
            break;
        case BlockCountRule::ceil_rule:
            plan.block_count =
                static_cast<std::size_t>(std::ceil(static_cast<double>(m) / plan.cube_root_m));
            break;
    }
    if (plan.block_count < 1) throw std::invalid_argument("bootstrap: block count is zero");
    return plan;
}

IntervalSet moving_window_intervals(const ReturnMatrix& r, std::size_t window) {
    const std::size_t m = r.periods();
    const std::size_t n = r.assets();
    if (window < 1) throw std::invalid_argument("moving_window_intervals: window < 1");
    if (window > m) throw std::invalid_argument("moving_window_intervals: window > m");
    const std::size_t n_windows = m - window + 1;

    MinMaxAccum global(n);

#ifdef _OPENMP
#pragma omp parallel
    {
        MinMaxAccum local(n);
        Vector mu(n);
        Vector sigma(n * n);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(n_windows); ++w) {
            detail::mean_rows(r.returns, static_cast<std::size_t>(w), window, mu.data());
            detail::cov_rows(r.returns, static_cast<std::size_t>(w), window, mu.data(),
                             sigma.data());
            local.fold(mu.data(), sigma.data(), n);
        }
#pragma omp critical
        global.merge(local);
    }
#else
    {
        Vector mu(n);
        Vector sigma(n * n);
        for (std::size_t w = 0; w < n_windows; ++w) {
            detail::mean_rows(r.returns, w, window, mu.data());
            detail::cov_rows(r.returns, w, window, mu.data(), sigma.data());
            global.fold(mu.data(), sigma.data(), n);
        }
    }
#endif

    IntervalSet out;
    out.method = UncertaintyMethod::moving_window;
    out.codes = r.codes;
    out.mu_lo = std::move(global.mu_lo);
    out.mu_hi = std::move(global.mu_hi);
    out.sigma_lo = Matrix(n, n);
    out.sigma_hi = Matrix(n, n);
    std::copy(global.sig_lo.begin(), global.sig_lo.end(), out.sigma_lo.data());
    std::copy(global.sig_hi.begin(), global.sig_hi.end(), out.sigma_hi.data());
    out.meta = MovingWindowMeta{window, n_windows};
    return out;
}

double percentile(std::vector<double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("percentile: empty sample list");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("percentile: p outside [0, 1]");
    std::sort(samples.begin(), samples.end());
    const std::size_t count = samples.size();
    const double h = p * static_cast<double>(count - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= count) return samples[count - 1];
    const double frac = h - static_cast<double>(lo);
    return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

IntervalSet block_bootstrap_intervals(const ReturnMatrix& r, const BootstrapConfig& cfg) {
    const std::size_t m = r.periods();
    const std::size_t n = r.assets();
    if (m < 2) throw std::invalid_argument("bootstrap: need at least 2 return rows");
    if (cfg.n_boot < 2) throw std::invalid_argument("bootstrap: n_boot < 2");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("bootstrap: alpha outside (0, 1)");

    const BlockPlan plan = bootstrap_block_plan(m, cfg);
    const std::size_t sample_rows = plan.block_len * plan.block_count;
    const std::size_t n_tri = n * (n + 1) / 2;  // store upper triangle per replication
    const std::size_t n_stats = n + n_tri;
    const std::size_t reps = cfg.n_boot;

    // slab of per-replication statistics, indexed by replication: the parallel
    // loop writes disjoint rows, so content never depends on scheduling
    std::vector<double> stats(reps * n_stats);

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<std::uint32_t> idx(sample_rows);
        Vector mu(n);
        Vector sigma(n * n);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t rep = 0; rep < static_cast<std::ptrdiff_t>(reps); ++rep) {
            auto rng = Xoshiro256StarStar::substream(cfg.seed, static_cast<std::uint64_t>(rep));
            for (std::size_t j = 0; j < sample_rows; ++j)
                idx[j] = static_cast<std::uint32_t>(rng.uniform_index(m));
            detail::mean_gather(r.returns, idx.data(), sample_rows, mu.data());
            detail::cov_gather(r.returns, idx.data(), sample_rows, mu.data(), sigma.data());

            double* slot = stats.data() + static_cast<std::size_t>(rep) * n_stats;
            for (std::size_t i = 0; i < n; ++i) slot[i] = mu[i];
            std::size_t e = n;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = i; k < n; ++k) slot[e++] = sigma[i * n + k];
        }
    }

    const double p_lo = cfg.alpha / 2.0;
    const double p_hi = 1.0 - cfg.alpha / 2.0;

    Vector lo(n_stats), hi(n_stats);
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> column(reps);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n_stats); ++s) {
            for (std::size_t rep = 0; rep < reps; ++rep)
                column[rep] = stats[rep * n_stats + static_cast<std::size_t>(s)];
            lo[static_cast<std::size_t>(s)] = percentile(column, p_lo);
            hi[static_cast<std::size_t>(s)] = percentile(column, p_hi);
        }
    }

    IntervalSet out;
    out.method = UncertaintyMethod::bootstrap;
    out.codes = r.codes;
    out.mu_lo.assign(lo.begin(), lo.begin() + n);
    out.mu_hi.assign(hi.begin(), hi.begin() + n);
    out.sigma_lo = Matrix(n, n);
    out.sigma_hi = Matrix(n, n);
    std::size_t e = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k) {
            out.sigma_lo(i, k) = lo[e];
            out.sigma_lo(k, i) = lo[e];
            out.sigma_hi(i, k) = hi[e];
            out.sigma_hi(k, i) = hi[e];
            ++e;
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

RobustParams robust_params(const IntervalSet& u) {
    const std::size_t n = u.mu_lo.size();
    if (u.mu_hi.size() != n || u.sigma_lo.rows() != n || u.sigma_hi.rows() != n)
        throw std::invalid_argument("robust_params: inconsistent interval set");

    RobustParams rp;
    rp.codes = u.codes;
    rp.mu0.resize(n);
    rp.beta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rp.mu0[i] = 0.5 * (u.mu_hi[i] + u.mu_lo[i]);
        rp.beta[i] = 0.5 * (u.mu_hi[i] - u.mu_lo[i]);
    }
    rp.sigma0 = Matrix(n, n);
    rp.delta = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            rp.sigma0(i, k) = 0.5 * (u.sigma_hi(i, k) + u.sigma_lo(i, k));
            rp.delta(i, k) = 0.5 * (u.sigma_hi(i, k) - u.sigma_lo(i, k));
        }
    return rp;
}

}  // namespace portopt
