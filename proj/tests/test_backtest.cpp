#include <doctest.h>

#include <cmath>
#include <sstream>

#include "portopt/backtest.hpp"
#include "portopt/market_data.hpp"
#include "testutil.hpp"

using namespace portopt;

TEST_CASE("allocate_funds reproduces the rounding rule") {
    const std::vector<std::string> codes{"BNGA", "NISP", "ZERO"};
    const Vector weights{0.52335, 0.00482, 0.0};
    const Vector prices{1225.0, 755.0, 100.0};
    const FundAllocation alloc = allocate_funds(codes, weights, prices, 100000.0);

    CHECK(alloc.rows[0].cash == doctest::Approx(52335.0).epsilon(1e-12));
    CHECK(alloc.rows[0].shares == 43.0);  // 52335/1225 = 42.72 rounds up
    CHECK(alloc.rows[1].shares == 1.0);   // 482/755 = 0.638 rounds up
    CHECK(alloc.rows[2].cash == 0.0);
    CHECK(alloc.rows[2].shares == 0.0);

    const double invested = 43.0 * 1225.0 + 1.0 * 755.0;
    CHECK(alloc.rounding_leftover == doctest::Approx(100000.0 - invested).epsilon(1e-12));

    double cash_total = 0.0;
    for (const auto& row : alloc.rows) cash_total += row.cash;
    CHECK(std::fabs(cash_total - 100000.0 * (weights[0] + weights[1] + weights[2])) <= 0.5);
}

TEST_CASE("fractional mode keeps exact quotients") {
    const FundAllocation alloc =
        allocate_funds({"AAA"}, Vector{1.0}, Vector{755.0}, 100000.0, true);
    CHECK(alloc.rows[0].shares == doctest::Approx(100000.0 / 755.0).epsilon(1e-15));
}

TEST_CASE("allocate_funds validates input") {
    CHECK_THROWS_AS(allocate_funds({"A"}, Vector{1.0}, Vector{0.0}, 1000.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(allocate_funds({"A"}, Vector{1.0}, Vector{10.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(allocate_funds({"A", "B"}, Vector{1.0}, Vector{10.0, 5.0}, 100.0),
                    std::invalid_argument);
}

TEST_CASE("doubling capital at fixed prices roughly doubles share counts") {
    Xoshiro256StarStar rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(6);
        std::vector<std::string> codes;
        Vector weights(n), prices(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            codes.push_back("A" + std::to_string(i));
            weights[i] = rng.uniform01() + 0.01;
            sum += weights[i];
            prices[i] = 50.0 + 5000.0 * rng.uniform01();
        }
        for (double& w : weights) w /= sum;
        const double capital = 100000.0;

        const FundAllocation one = allocate_funds(codes, weights, prices, capital);
        const FundAllocation two = allocate_funds(codes, weights, prices, 2.0 * capital);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::fabs(two.rows[i].shares - 2.0 * one.rows[i].shares) <= 1.0);
    }
}

TEST_CASE("capital_gain reproduces hand rows") {
    FundAllocation alloc;
    alloc.capital = 100000.0;
    alloc.rows = {{"BNGA", 0.0, 0.0, 1225.0, 43.0},
                  {"BJTM", 0.0, 0.0, 735.0, 61.0},
                  {"IDLE", 0.0, 0.0, 500.0, 0.0}};
    const GainReport report =
        capital_gain(alloc, {"BNGA", "BJTM", "IDLE"}, Vector{1275.0, 665.0, 700.0});
    CHECK(report.rows[0].gain == 2150.0);   // 43 * (1275 - 1225)
    CHECK(report.rows[1].gain == -4270.0);  // 61 * (665 - 735)
    CHECK(report.rows[2].gain == 0.0);
    CHECK(report.total == 2150.0 - 4270.0);
}

TEST_CASE("capital_gain total is the exact sum of rows") {
    Xoshiro256StarStar rng(17);
    FundAllocation alloc;
    std::vector<std::string> codes;
    Vector sell;
    for (std::size_t i = 0; i < 12; ++i) {
        const std::string code = "A" + std::to_string(i);
        const double buy = 100.0 + static_cast<double>(rng.uniform_index(5000));
        alloc.rows.push_back({code, 0.0, 0.0, buy, static_cast<double>(rng.uniform_index(90))});
        codes.push_back(code);
        sell.push_back(100.0 + static_cast<double>(rng.uniform_index(5000)));
    }
    const GainReport report = capital_gain(alloc, codes, sell);
    double sum = 0.0;
    for (const auto& row : report.rows) sum += row.gain;
    CHECK(report.total == sum);
}

TEST_CASE("capital_gain with sell == buy is all zero") {
    FundAllocation alloc;
    alloc.rows = {{"A", 0.5, 50.0, 123.0, 7.0}, {"B", 0.5, 50.0, 456.0, 2.0}};
    const GainReport report = capital_gain(alloc, {"A", "B"}, Vector{123.0, 456.0});
    for (const auto& row : report.rows) CHECK(row.gain == 0.0);
    CHECK(report.total == 0.0);
}

TEST_CASE("capital_gain rejects mismatched codes") {
    FundAllocation alloc;
    alloc.rows = {{"A", 1.0, 100.0, 10.0, 10.0}};
    CHECK_THROWS_AS(capital_gain(alloc, {"B"}, Vector{11.0}), std::invalid_argument);
}

TEST_CASE("return series on constant prices is zero") {
    std::istringstream in("date,AAA\n2023-01-02,100\n2023-01-03,100\n2023-01-04,100\n");
    const PriceTable table = load_prices(in);
    const ReturnSeries series = portfolio_return_series(Vector{1.0}, table);
    for (double v : series.values) CHECK(v == 0.0);
}

TEST_CASE("single-asset series is the asset's cumulative return") {
    std::istringstream in("date,AAA\n2023-01-02,100\n2023-01-03,110\n");
    const ReturnSeries series = portfolio_return_series(Vector{1.0}, load_prices(in));
    CHECK(series.values[0] == 0.0);
    CHECK(series.values[1] == doctest::Approx(0.10).epsilon(1e-14));
}

TEST_CASE("two-asset series matches a hand-computed path") {
    std::istringstream in(
        "date,AAA,BBB\n"
        "2023-01-02,100,200\n"
        "2023-01-03,110,190\n"
        "2023-01-04,120,210\n");
    const PriceTable table = load_prices(in);
    const Vector weights{0.5, 0.5};
    const ReturnSeries series = portfolio_return_series(weights, table);

    // spreadsheet oracle: 0.5*(P_t/P_0 - 1) per asset, summed
    const double day1 = 0.5 * (110.0 - 100.0) / 100.0 + 0.5 * (190.0 - 200.0) / 200.0;
    const double day2 = 0.5 * (120.0 - 100.0) / 100.0 + 0.5 * (210.0 - 200.0) / 200.0;
    CHECK(series.values[0] == 0.0);
    CHECK(series.values[1] == doctest::Approx(day1).epsilon(1e-12));
    CHECK(series.values[2] == doctest::Approx(day2).epsilon(1e-12));
    CHECK(series.dates.front() == "2023-01-02");
}

TEST_CASE("return series needs at least two rows") {
    std::istringstream in("date,AAA\n2023-01-02,100\n");
    const PriceTable table = load_prices(in);
    CHECK_THROWS_AS(portfolio_return_series(Vector{1.0}, table), std::invalid_argument);
}
