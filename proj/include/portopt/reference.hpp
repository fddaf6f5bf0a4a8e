#pragma once

#include "portopt/market_data.hpp"
#include "portopt/uncertainty.hpp"

namespace portopt::reference {

// Naive single-threaded implementations of the uncertainty kernels. They keep
// the same per-sample accumulation order (ascending rows, divide by the count)
// as the parallel kernels so tests can compare outputs bitwise; everything
// else is written for obviousness, not speed.

IntervalSet moving_window_intervals(const ReturnMatrix& r, std::size_t window);

IntervalSet block_bootstrap_intervals(const ReturnMatrix& r, const BootstrapConfig& cfg);

}  // namespace portopt::reference
