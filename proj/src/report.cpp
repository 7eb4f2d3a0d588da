#include "symsing/report.hpp"

#include <charconv>
#include <cmath>

namespace symsing {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void append_csv_cells(const Cell& cell, std::vector<std::string>& out) {
    std::visit(overloaded{
                   [&](std::monostate) { out.emplace_back(); },
                   [&](bool b) { out.emplace_back(b ? "true" : "false"); },
                   [&](std::int64_t x) { out.push_back(std::to_string(x)); },
                   [&](std::uint64_t x) { out.push_back(std::to_string(x)); },
                   [&](double x) { out.push_back(format_double(x)); },
                   [&](const std::string& s) { out.push_back(s); },
                   [&](const ExactFraction& f) {
                       out.push_back(format_double(f.value()));
                       out.push_back(std::to_string(f.numerator));
                       out.push_back(std::to_string(f.denominator));
                   },
                   [&](const nlohmann::json& j) { out.push_back(j.dump()); },
               },
               cell);
}

nlohmann::json to_json(const Cell& cell) {
    return std::visit(overloaded{
                          [](std::monostate) { return nlohmann::json(nullptr); },
                          [](bool b) { return nlohmann::json(b); },
                          [](std::int64_t x) { return nlohmann::json(x); },
                          [](std::uint64_t x) { return nlohmann::json(x); },
                          [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); },
                          [](const std::string& s) { return nlohmann::json(s); },
                          [](const ExactFraction& f) { return nlohmann::json::array({f.numerator, f.denominator}); },
                          [](const nlohmann::json& j) { return j; },
                      },
                      cell);
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string render_csv(const ResultTable& table) {
    // A column holding a fraction in any row widens to three CSV columns.
    std::vector<bool> fraction_column(table.columns.size(), false);
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::holds_alternative<ExactFraction>(row[c])) fraction_column[c] = true;
        }
    }
    std::vector<std::string> header;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        header.push_back(table.columns[c]);
        if (fraction_column[c]) {
            header.push_back(table.columns[c] + "_num");
            header.push_back(table.columns[c] + "_den");
        }
    }
    std::string out;
    auto write_line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += quote_csv(fields[i]);
        }
        out += '\n';
    };
    write_line(header);
    for (const auto& row : table.rows) {
        std::vector<std::string> fields;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (fraction_column[c] && std::holds_alternative<std::monostate>(row[c])) {
                fields.insert(fields.end(), 3, std::string());
            } else {
                append_csv_cells(row[c], fields);
            }
        }
        write_line(fields);
    }
    return out;
}

std::string render_json(const Report& report) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& row : report.results.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < report.results.columns.size(); ++c) obj[report.results.columns[c]] = to_json(row[c]);
        results.push_back(std::move(obj));
    }
    nlohmann::json doc = {{"config", report.config}, {"results", results}, {"violations", report.violations}};
    return doc.dump(2) + "\n";
}

}  // namespace symsing
