#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdfgan/core/error.hpp"
#include "mdfgan/core/format.hpp"
#include "mdfgan/data/types.hpp"

namespace mdfgan::data {

struct CsvTable {
    std::vector<Sample> samples;
    std::size_t rows = 0;
    bool had_header = false;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace detail

/// Reads rows of `d1` inputs followed by `d2` responses. `d2` may be zero for
/// input-only files.
///
/// The first non-blank line is taken as a header only when none of its fields
/// is numeric and at least one more non-blank line follows; otherwise it is
/// parsed as data like every other row.
inline CsvTable parse_csv(std::istream& in, std::size_t d1, std::size_t d2, std::string const& source = "<csv>")
{
    if (d1 == 0) {
        throw InvalidArgument("load_csv: d1 must be positive");
    }
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) lines.emplace_back(number, std::move(line));
    }

    CsvTable table;
    std::size_t first = 0;
    if (lines.size() > 1) {
        bool any_numeric = false;
        for (auto f : detail::split_fields(lines.front().second)) any_numeric |= parse_double(f).has_value();
        if (!any_numeric) {
            table.had_header = true;
            first = 1;
        }
    }
    const std::size_t width = d1 + d2;
    for (std::size_t i = first; i < lines.size(); ++i) {
        auto const& [lineno, text] = lines[i];
        auto fields = detail::split_fields(text);
        if (fields.size() != width) {
            throw ParseError(source, lineno,
                             "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        }
        Sample s;
        s.x.reserve(d1);
        s.y.reserve(d2);
        for (std::size_t f = 0; f < width; ++f) {
            auto v = parse_double(fields[f]);
            if (!v) {
                throw ParseError(source, lineno, "field " + std::to_string(f + 1) + " is not a finite number: '" +
                                                     std::string(trim(fields[f])) + "'");
            }
            (f < d1 ? s.x : s.y).push_back(*v);
        }
        table.samples.push_back(std::move(s));
    }
    table.rows = table.samples.size();
    if (table.rows == 0) {
        table.warnings.push_back(source + ": no data rows");
    }
    return table;
}

inline CsvTable load_csv(std::filesystem::path const& path, std::size_t d1, std::size_t d2)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "': file not found or unreadable");
    }
    return parse_csv(in, d1, d2, path.string());
}

inline void write_samples_csv(std::ostream& out, std::vector<Sample> const& samples)
{
    for (auto const& s : samples) {
        bool first = true;
        for (auto const* part : {&s.x, &s.y}) {
            for (double v : *part) {
                if (!first) out << ',';
                out << format_double(v);
                first = false;
            }
        }
        out << '\n';
    }
}

inline void write_samples_csv(std::filesystem::path const& path, std::vector<Sample> const& samples)
{
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    write_samples_csv(out, samples);
}

} // namespace mdfgan::data
