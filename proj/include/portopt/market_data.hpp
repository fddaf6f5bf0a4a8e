#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "portopt/linalg.hpp"

namespace portopt {

enum class FillPolicy { reject, forward_fill };

/// Validated daily closing-price table. Dates are ISO-8601 strings, strictly
/// increasing; all prices are positive; dates carry no calendar semantics.
struct PriceTable {
    std::vector<std::string> dates;
    std::vector<std::string> codes;
    Matrix prices;  // dates.size() x codes.size()

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_date(const std::string& date) const;

    /// Row slice [first, last] inclusive.
    PriceTable slice(std::size_t first, std::size_t last) const;
};

/// Daily simple returns: returns(t, i) = (p(t+1, i) - p(t, i)) / p(t, i).
/// One row fewer than the price table; each row labelled with the later date.
struct ReturnMatrix {
    std::vector<std::string> dates;
    std::vector<std::string> codes;
    Matrix returns;

    std::size_t periods() const { return returns.rows(); }
    std::size_t assets() const { return returns.cols(); }
};

/// Parse a price CSV: header `date,<CODE1>,...,<CODEn>`, ISO-8601 dates,
/// positive decimal prices. Under `forward_fill` an empty cell repeats the
/// most recent prior value of its column; under `reject` any empty cell is an
/// error. Throws std::runtime_error on malformed input.
PriceTable load_prices(std::istream& in, FillPolicy policy = FillPolicy::reject);

PriceTable load_prices_file(const std::string& path, FillPolicy policy = FillPolicy::reject);

ReturnMatrix compute_returns(const PriceTable& table);

}  // namespace portopt
