#pragma once

#include <string>

#include <json.hpp>

#include "portopt/backtest.hpp"
#include "portopt/estimation.hpp"
#include "portopt/qp_solver.hpp"
#include "portopt/robust_model.hpp"
#include "portopt/uncertainty.hpp"

namespace portopt {

// JSON artifacts keep nlohmann defaults: keys sorted, numbers emitted as
// shortest round-trip decimals, so re-runs are byte-identical.

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const IntervalSet& u);
nlohmann::json to_json(const QpProblem& p);
nlohmann::json to_json(const EstimatePair& est, const std::vector<std::string>& codes,
                       std::size_t periods);
nlohmann::json to_json(const PortfolioSolution& sol, const std::vector<std::string>& codes);
nlohmann::json to_json(const FundAllocation& alloc);
nlohmann::json to_json(const GainReport& report);
nlohmann::json to_json(const ReturnSeries& series);

std::string gain_report_csv(const GainReport& report);
std::string return_series_csv(const ReturnSeries& series);

/// Integers print bare ("43"), other doubles as shortest round-trip decimals.
std::string format_number(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace portopt
