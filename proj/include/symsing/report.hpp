#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "symsing/matrix_core.hpp"

namespace symsing {

/// One table value. Fractions become a [num, den] pair in JSON and three
/// columns (decimal, _num, _den) in CSV; json values are embedded as-is in JSON
/// and as compact text in CSV.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string, ExactFraction,
                          nlohmann::json>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    nlohmann::json config = nlohmann::json::object();
    ResultTable results;
    nlohmann::json violations = nlohmann::json::array();
};

/// RFC 4180: header row, CRLF-free "\n" line ends, quoting only where needed.
std::string render_csv(const ResultTable& table);
/// {"config": ..., "results": [row objects], "violations": [...]}, pretty-printed.
std::string render_json(const Report& report);

std::string format_double(double x);

}  // namespace symsing
