#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "portopt/estimation.hpp"
#include "portopt/linalg.hpp"
#include "portopt/market_data.hpp"

namespace portopt {

enum class UncertaintyMethod { moving_window, bootstrap };

/// How the bootstrap block count B is derived from m.
///   floor_rule: L = floor(m^(1/3)), B = floor(m / L)            (default)
///   ceil_rule:  B = ceil(m / m^(1/3)), blocks still draw L rows
enum class BlockCountRule { floor_rule, ceil_rule };

struct BootstrapConfig {
    std::size_t n_boot = 1000;
    double alpha = 0.05;  // two-sided significance level
    std::uint64_t seed = 0;
    std::optional<std::size_t> block_len_override;
    BlockCountRule block_count_rule = BlockCountRule::floor_rule;
};

struct MovingWindowMeta {
    std::size_t window = 0;
    std::size_t windows_processed = 0;
};

struct BootstrapMeta {
    std::size_t n_boot = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::size_t block_len = 0;
    std::size_t block_count = 0;
    std::size_t sample_rows = 0;  // block_len * block_count
    double cube_root_m = 0.0;     // unfloored m^(1/3), kept for the record
    bool block_len_overridden = false;
    BlockCountRule block_count_rule = BlockCountRule::floor_rule;
};

/// Elementwise interval bounds on the mean vector and covariance matrix.
struct IntervalSet {
    UncertaintyMethod method = UncertaintyMethod::moving_window;
    std::vector<std::string> codes;
    Vector mu_lo, mu_hi;
    Matrix sigma_lo, sigma_hi;
    std::variant<MovingWindowMeta, BootstrapMeta> meta;
};

/// Interval midpoints and half-widths: mu0 +/- beta and sigma0 +/- delta
/// reconstruct the interval bounds.
struct RobustParams {
    std::vector<std::string> codes;
    Vector mu0, beta;
    Matrix sigma0, delta;
};

/// Mean/covariance over every length-`window` contiguous sub-sample
/// (divisor = window); bounds are elementwise min/max across the
/// m - window + 1 sub-samples. OpenMP-parallel over windows; output is
/// independent of thread count.
IntervalSet moving_window_intervals(const ReturnMatrix& r, std::size_t window);

/// Block bootstrap: each replication concatenates B blocks of L rows drawn
/// uniformly with replacement, then estimates mean/covariance (divisor B*L);
/// bounds are the alpha/2 and 1-alpha/2 percentiles across replications.
/// Replication i draws from RNG substream (seed, i), so results are
/// bitwise-identical across runs and thread counts.
IntervalSet block_bootstrap_intervals(const ReturnMatrix& r, const BootstrapConfig& cfg);

/// Linear-interpolation percentile on order statistics:
/// h = p*(N-1); s[floor(h)] + frac(h) * (s[floor(h)+1] - s[floor(h)]).
double percentile(std::vector<double> samples, double p);

/// Midpoint/half-width parameters of an interval set.
RobustParams robust_params(const IntervalSet& u);

/// Effective (L, B, m^(1/3)) for a sample size and bootstrap config.
struct BlockPlan {
    std::size_t block_len = 0;
    std::size_t block_count = 0;
    double cube_root_m = 0.0;
    bool overridden = false;
};
BlockPlan bootstrap_block_plan(std::size_t m, const BootstrapConfig& cfg);

}  // namespace portopt
