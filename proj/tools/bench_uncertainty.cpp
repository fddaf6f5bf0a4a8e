// Benchmark of the OpenMP uncertainty kernels against the serial reference.
// Also re-checks that both produce bitwise-identical interval sets.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "portopt/reference.hpp"
#include "portopt/rng.hpp"
#include "portopt/uncertainty.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace portopt;

namespace {

ReturnMatrix synthetic_returns(std::size_t m, std::size_t n, std::uint64_t seed) {
    ReturnMatrix r;
    r.returns = Matrix(m, n);
    Xoshiro256StarStar rng(seed);
    for (std::size_t t = 0; t < m; ++t) {
        r.dates.push_back("2020-01-01");
        for (std::size_t i = 0; i < n; ++i)
            r.returns(t, i) = 0.04 * rng.uniform01() - 0.02;
    }
    for (std::size_t i = 0; i < n; ++i) r.codes.push_back("A" + std::to_string(i));
    return r;
}

bool bitwise_equal(const IntervalSet& a, const IntervalSet& b) {
    auto eq = [](const double* x, const double* y, std::size_t count) {
        return std::memcmp(x, y, count * sizeof(double)) == 0;
    };
    return eq(a.mu_lo.data(), b.mu_lo.data(), a.mu_lo.size()) &&
           eq(a.mu_hi.data(), b.mu_hi.data(), a.mu_hi.size()) &&
           eq(a.sigma_lo.data(), b.sigma_lo.data(), a.sigma_lo.size()) &&
           eq(a.sigma_hi.data(), b.sigma_hi.data(), a.sigma_hi.size());
}

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t m = 2000;
    std::size_t n = 45;
    std::size_t window = 90;
    std::size_t n_boot = 1000;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        const auto value = static_cast<std::size_t>(std::stoull(argv[i + 1]));
        if (key == "--rows") m = value;
        else if (key == "--assets") n = value;
        else if (key == "--window") window = value;
        else if (key == "--nboot") n_boot = value;
    }

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("returns: %zux%zu, window %zu, n_boot %zu\n\n", m, n, window, n_boot);

    const ReturnMatrix r = synthetic_returns(m, n, 7);

    IntervalSet mw_par, mw_ref;
    const double t_mw_par = time_ms([&] { mw_par = moving_window_intervals(r, window); });
    const double t_mw_ref = time_ms([&] { mw_ref = reference::moving_window_intervals(r, window); });
    std::printf("moving-window   parallel %8.1f ms   reference %8.1f ms   speedup %.2fx   %s\n",
                t_mw_par, t_mw_ref, t_mw_ref / t_mw_par,
                bitwise_equal(mw_par, mw_ref) ? "bitwise-equal" : "MISMATCH");

    BootstrapConfig cfg;
    cfg.n_boot = n_boot;
    cfg.seed = 42;
    IntervalSet bs_par, bs_ref;
    const double t_bs_par = time_ms([&] { bs_par = block_bootstrap_intervals(r, cfg); });
    const double t_bs_ref = time_ms([&] { bs_ref = reference::block_bootstrap_intervals(r, cfg); });
    std::printf("block-bootstrap parallel %8.1f ms   reference %8.1f ms   speedup %.2fx   %s\n",
                t_bs_par, t_bs_ref, t_bs_ref / t_bs_par,
                bitwise_equal(bs_par, bs_ref) ? "bitwise-equal" : "MISMATCH");

    return bitwise_equal(mw_par, mw_ref) && bitwise_equal(bs_par, bs_ref) ? 0 : 1;
}
