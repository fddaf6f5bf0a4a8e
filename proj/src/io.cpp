#include "portopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace portopt {

using nlohmann::json;

nlohmann::json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::runtime_error("matrix_from_json: expected array of arrays");
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw std::runtime_error("matrix_from_json: ragged rows");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

nlohmann::json to_json(const IntervalSet& u) {
    json params;
    if (u.method == UncertaintyMethod::moving_window) {
        const auto& meta = std::get<MovingWindowMeta>(u.meta);
        params = {{"window", meta.window}, {"windows_processed", meta.windows_processed}};
    } else {
        const auto& meta = std::get<BootstrapMeta>(u.meta);
        params = {{"n_boot", meta.n_boot},
                  {"alpha", meta.alpha},
                  {"seed", meta.seed},
                  {"block_len", meta.block_len},
                  {"block_count", meta.block_count},
                  {"sample_rows", meta.sample_rows},
                  {"cube_root_m", meta.cube_root_m},
                  {"block_len_overridden", meta.block_len_overridden},
                  {"block_count_rule",
                   meta.block_count_rule == BlockCountRule::floor_rule ? "floor" : "ceil"}};
    }
    return {{"method", u.method == UncertaintyMethod::moving_window ? "moving_window" : "bootstrap"},
            {"params", params},
            {"codes", u.codes},
            {"mu_lo", u.mu_lo},
            {"mu_hi", u.mu_hi},
            {"sigma_lo", matrix_to_json(u.sigma_lo)},
            {"sigma_hi", matrix_to_json(u.sigma_hi)}};
}

nlohmann::json to_json(const QpProblem& p) {
    return {{"label", p.label == QpLabel::classical ? "classical" : "robust"},
            {"gamma", p.gamma},
            {"Q", matrix_to_json(p.q)},
            {"c", p.c}};
}

nlohmann::json to_json(const EstimatePair& est, const std::vector<std::string>& codes,
                       std::size_t periods) {
    return {{"codes", codes},
            {"m", periods},
            {"mu", est.mu},
            {"sigma", matrix_to_json(est.sigma)}};
}

nlohmann::json to_json(const PortfolioSolution& sol, const std::vector<std::string>& codes) {
    return {{"codes", codes},
            {"weights", sol.weights},
            {"f_val", sol.f_val},
            {"iterations", sol.iterations},
            {"kkt_residual", sol.kkt_residual},
            {"psd_shift", sol.psd_shift},
            {"converged", sol.converged}};
}

nlohmann::json to_json(const FundAllocation& alloc) {
    json rows = json::array();
    for (const auto& row : alloc.rows)
        rows.push_back({{"code", row.code},
                        {"weight", row.weight},
                        {"cash", row.cash},
                        {"buy_price", row.buy_price},
                        {"shares", row.shares}});
    return {{"capital", alloc.capital},
            {"fractional", alloc.fractional},
            {"rows", rows},
            {"rounding_leftover", alloc.rounding_leftover}};
}

nlohmann::json to_json(const GainReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"code", row.code},
                        {"shares", row.shares},
                        {"buy_price", row.buy_price},
                        {"sell_price", row.sell_price},
                        {"gain", row.gain}});
    return {{"rows", rows}, {"total", report.total}};
}

nlohmann::json to_json(const ReturnSeries& series) {
    return {{"dates", series.dates}, {"values", series.values}};
}

std::string format_number(double v) {
    if (std::rint(v) == v && std::fabs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string gain_report_csv(const GainReport& report) {
    std::string out = "code,shares,buy,sell,gain\n";
    for (const auto& row : report.rows) {
        out += row.code;
        out += ',';
        out += format_number(row.shares);
        out += ',';
        out += format_number(row.buy_price);
        out += ',';
        out += format_number(row.sell_price);
        out += ',';
        out += format_number(row.gain);
        out += '\n';
    }
    return out;
}

std::string return_series_csv(const ReturnSeries& series) {
    std::string out = "date,value\n";
    for (std::size_t t = 0; t < series.dates.size(); ++t) {
        out += series.dates[t];
        out += ',';
        out += format_number(series.values[t]);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace portopt
