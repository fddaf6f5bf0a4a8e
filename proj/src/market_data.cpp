#include "portopt/market_data.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace portopt {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool is_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    const int month = (s[5] - '0') * 10 + (s[6] - '0');
    const int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

double parse_price(const std::string& cell, std::size_t line_no, const std::string& code) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("malformed CSV: line " + std::to_string(line_no) +
                                 ", column " + code + ": cannot parse price '" + cell + "'");
    if (!(value > 0.0))
        throw std::runtime_error("nonpositive price at line " + std::to_string(line_no) +
                                 ", column " + code);
    return value;
}

}  // namespace

std::size_t PriceTable::find_date(const std::string& date) const {
    for (std::size_t i = 0; i < dates.size(); ++i)
        if (dates[i] == date) return i;
    return npos;
}

PriceTable PriceTable::slice(std::size_t first, std::size_t last) const {
    if (first > last || last >= dates.size())
        throw std::invalid_argument("PriceTable::slice: bad row range");
    PriceTable out;
    out.codes = codes;
    out.dates.assign(dates.begin() + first, dates.begin() + last + 1);
    out.prices = Matrix(last - first + 1, codes.size());
    for (std::size_t t = 0; t <= last - first; ++t)
        for (std::size_t i = 0; i < codes.size(); ++i)
            out.prices(t, i) = prices(first + t, i);
    return out;
}

PriceTable load_prices(std::istream& in, FillPolicy policy) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("malformed CSV: empty input");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date")
        throw std::runtime_error("malformed CSV: header must be 'date,<CODE1>,...'");

    PriceTable table;
    table.codes.assign(header.begin() + 1, header.end());
    const std::size_t n = table.codes.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (table.codes[i].empty())
            throw std::runtime_error("malformed CSV: empty asset code in header");
        for (std::size_t j = i + 1; j < n; ++j)
            if (table.codes[i] == table.codes[j])
                throw std::runtime_error("malformed CSV: duplicate asset code " + table.codes[i]);
    }

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n + 1)
            throw std::runtime_error("malformed CSV: line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(n + 1));
        const std::string& date = cells[0];
        if (!is_iso_date(date))
            throw std::runtime_error("malformed CSV: line " + std::to_string(line_no) +
                                     ": bad date '" + date + "'");
        if (!table.dates.empty() && date <= table.dates.back())
            throw std::runtime_error("malformed CSV: line " + std::to_string(line_no) +
                                     ": duplicate or unsorted date '" + date + "'");

        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = cells[i + 1];
            if (cell.empty()) {
                if (policy == FillPolicy::reject)
                    throw std::runtime_error("empty cell at line " + std::to_string(line_no) +
                                             ", column " + table.codes[i]);
                if (rows.empty())
                    throw std::runtime_error("empty leading cell at line " + std::to_string(line_no) +
                                             ", column " + table.codes[i]);
                row[i] = rows.back()[i];
            } else {
                row[i] = parse_price(cell, line_no, table.codes[i]);
            }
        }
        table.dates.push_back(date);
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw std::runtime_error("malformed CSV: no data rows");

    table.prices = Matrix(rows.size(), n);
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t i = 0; i < n; ++i) table.prices(t, i) = rows[t][i];
    return table;
}

PriceTable load_prices_file(const std::string& path, FillPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open price file: " + path);
    return load_prices(in, policy);
}

ReturnMatrix compute_returns(const PriceTable& table) {
    const std::size_t m_p = table.prices.rows();
    if (m_p < 2) throw std::runtime_error("compute_returns: need at least 2 price rows");
    const std::size_t n = table.codes.size();

    ReturnMatrix r;
    r.codes = table.codes;
    r.dates.assign(table.dates.begin() + 1, table.dates.end());
    r.returns = Matrix(m_p - 1, n);
    for (std::size_t t = 0; t + 1 < m_p; ++t)
        for (std::size_t i = 0; i < n; ++i)
            r.returns(t, i) = (table.prices(t + 1, i) - table.prices(t, i)) / table.prices(t, i);
    return r;
}

}  // namespace portopt
