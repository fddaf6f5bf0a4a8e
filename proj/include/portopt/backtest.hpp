#pragma once

#include <string>
#include <vector>

#include "portopt/linalg.hpp"
#include "portopt/market_data.hpp"

namespace portopt {

struct AllocationRow {
    std::string code;
    double weight = 0.0;
    double cash = 0.0;  // weight * capital
    double buy_price = 0.0;
    double shares = 0.0;  // integral unless the allocation is fractional
};

struct FundAllocation {
    double capital = 0.0;
    bool fractional = false;
    std::vector<AllocationRow> rows;
    double rounding_leftover = 0.0;  // capital - sum(shares * buy_price)
};

struct GainRow {
    std::string code;
    double shares = 0.0;
    double buy_price = 0.0;
    double sell_price = 0.0;
    double gain = 0.0;  // shares * (sell - buy)
};

struct GainReport {
    std::vector<GainRow> rows;
    double total = 0.0;  // exact sum of row gains
};

/// Cumulative buy-and-hold portfolio return relative to the first date:
/// value_t = sum_i w_i * (P(t, i) - P(0, i)) / P(0, i).
struct ReturnSeries {
    std::vector<std::string> dates;
    Vector values;
};

/// cash_i = weight_i * capital; shares_i = round(cash_i / buy_price_i),
/// half away from zero. Fractional mode keeps the exact quotient.
FundAllocation allocate_funds(const std::vector<std::string>& codes, const Vector& weights,
                              const Vector& buy_prices, double capital, bool fractional = false);

/// Per-row gain = shares * (sell - buy); `sell_codes` must match the
/// allocation rows in order.
GainReport capital_gain(const FundAllocation& alloc, const std::vector<std::string>& sell_codes,
                        const Vector& sell_prices);

ReturnSeries portfolio_return_series(const Vector& weights, const PriceTable& window);

}  // namespace portopt
