#pragma once

// RFC 4180 CSV output: CRLF record separators, a header row, fields quoted
// only when they contain a comma, quote, CR or LF. Doubles are written with
// 17 significant digits so values round-trip exactly.

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace zetawalk {

std::string csv_escape(std::string_view field);
std::string format_double(double value);

/// Parses one CSV document (RFC 4180) into rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    template <class... Fields>
    void row(const Fields&... fields) {
        std::vector<std::string> cells;
        cells.reserve(sizeof...(fields));
        (cells.push_back(to_field(fields)), ...);
        write_cells(cells);
    }

    void write_cells(const std::vector<std::string>& cells);

    std::size_t columns() const { return columns_; }

private:
    static std::string to_field(double v) { return format_double(v); }
    static std::string to_field(bool v) { return v ? "true" : "false"; }
    static std::string to_field(std::string_view v) { return std::string(v); }
    static std::string to_field(const std::string& v) { return v; }
    static std::string to_field(const char* v) { return v; }
    template <std::integral T>
        requires(!std::same_as<T, bool>)
    static std::string to_field(T v) {
        return std::to_string(v);
    }

    std::ostream& out_;
    std::size_t columns_;
};

}  // namespace zetawalk
