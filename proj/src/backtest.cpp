#include "portopt/backtest.hpp"

#include <cmath>
#include <stdexcept>

namespace portopt {

FundAllocation allocate_funds(const std::vector<std::string>& codes, const Vector& weights,
                              const Vector& buy_prices, double capital, bool fractional) {
    const std::size_t n = codes.size();
    if (weights.size() != n || buy_prices.size() != n)
        throw std::invalid_argument("allocate_funds: dimension mismatch");
    if (!(capital > 0.0)) throw std::invalid_argument("allocate_funds: capital must be > 0");
    for (double p : buy_prices)
        if (!(p > 0.0)) throw std::invalid_argument("allocate_funds: nonpositive buy price");

    FundAllocation alloc;
    alloc.capital = capital;
    alloc.fractional = fractional;
    alloc.rows.reserve(n);
    double invested = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        AllocationRow row;
        row.code = codes[i];
        row.weight = weights[i];
        row.cash = weights[i] * capital;
        row.buy_price = buy_prices[i];
        const double exact = row.cash / buy_prices[i];
        row.shares = fractional ? exact : static_cast<double>(std::llround(exact));
        invested += row.shares * row.buy_price;
        alloc.rows.push_back(std::move(row));
    }
    alloc.rounding_leftover = capital - invested;
    return alloc;
}

GainReport capital_gain(const FundAllocation& alloc, const std::vector<std::string>& sell_codes,
                        const Vector& sell_prices) {
    const std::size_t n = alloc.rows.size();
    if (sell_codes.size() != n || sell_prices.size() != n)
        throw std::invalid_argument("capital_gain: dimension mismatch");

    GainReport report;
    report.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sell_codes[i] != alloc.rows[i].code)
            throw std::invalid_argument("capital_gain: code mismatch at position " +
                                        std::to_string(i) + " (" + sell_codes[i] + " vs " +
                                        alloc.rows[i].code + ")");
        if (!(sell_prices[i] > 0.0))
            throw std::invalid_argument("capital_gain: nonpositive sell price for " +
                                        sell_codes[i]);
        GainRow row;
        row.code = alloc.rows[i].code;
        row.shares = alloc.rows[i].shares;
        row.buy_price = alloc.rows[i].buy_price;
        row.sell_price = sell_prices[i];
        row.gain = row.shares * (row.sell_price - row.buy_price);
        report.total += row.gain;
        report.rows.push_back(std::move(row));
    }
    return report;
}

ReturnSeries portfolio_return_series(const Vector& weights, const PriceTable& window) {
    const std::size_t n = window.codes.size();
    const std::size_t rows = window.prices.rows();
    if (weights.size() != n)
        throw std::invalid_argument("portfolio_return_series: dimension mismatch");
    if (rows < 2) throw std::invalid_argument("portfolio_return_series: window needs >= 2 rows");

    ReturnSeries series;
    series.dates = window.dates;
    series.values.resize(rows);
    for (std::size_t t = 0; t < rows; ++t) {
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            value += weights[i] * (window.prices(t, i) - window.prices(0, i)) /
                     window.prices(0, i);
        series.values[t] = value;
    }
    return series;
}

}  // namespace portopt
