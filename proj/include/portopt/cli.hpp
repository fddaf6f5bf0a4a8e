#pragma once

#include <string>
#include <vector>

#include "portopt/backtest.hpp"
#include "portopt/estimation.hpp"
#include "portopt/market_data.hpp"
#include "portopt/qp_solver.hpp"
#include "portopt/uncertainty.hpp"

namespace portopt {

enum class Method { classical, robust_mw, robust_boot };
enum class OutputFormat { json, csv };

/// Effective configuration of one pipeline run. Echoed into every JSON
/// artifact so outputs are self-describing.
struct RunConfig {
    std::string input_path;
    FillPolicy fill = FillPolicy::reject;
    Method method = Method::robust_mw;
    std::size_t window = 90;
    BootstrapConfig bootstrap;
    std::vector<double> gammas = {5.0, 50.0, 100.0};
    double capital = 100000.0;
    std::string buy_date;
    std::string sell_date;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::json;
    bool fractional = false;
    SolverConfig solver;
};

struct OptimizeResult {
    double gamma = 0.0;
    PortfolioSolution solution;
    std::vector<std::string> codes;
};

struct AllocateResult {
    double gamma = 0.0;
    FundAllocation allocation;
};

struct BacktestResult {
    double gamma = 0.0;
    FundAllocation allocation;
    GainReport gains;
    ReturnSeries series;
    bool has_series = false;  // false when buy and sell dates coincide
};

struct SeriesResult {
    double gamma = 0.0;
    ReturnSeries series;
};

EstimatePair cmd_estimate(const RunConfig& cfg);
IntervalSet cmd_uncertainty(const RunConfig& cfg);
std::vector<OptimizeResult> cmd_optimize(const RunConfig& cfg);
std::vector<AllocateResult> cmd_allocate(const RunConfig& cfg);
std::vector<BacktestResult> cmd_backtest(const RunConfig& cfg);
std::vector<SeriesResult> cmd_series(const RunConfig& cfg);

/// Full command-line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv);

std::string method_tag(Method m);

}  // namespace portopt
