#pragma once

/*!
 * \file
 * \brief Dataset CSV format.
 *
 *     # comment lines start with '#'
 *     a1,a2,...,an,s1,s2,...,sn,measured
 *     0.5,0.5,1,4,2.5
 *
 * n is inferred from the header. Fields are plain decimal numbers (no
 * thousands separators); blank lines are ignored. Files are written with LF
 * endings and a trailing newline, numbers at 17 significant digits.
 */

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "fitting.hpp"
#include "types.hpp"

namespace mixlaw {

/// Shortest-safe round-trip text for a double: printf "%.17g".
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] inline void malformed(std::size_t line_no, const std::string& what)
{
    raise(Errc::MalformedData, "line " + std::to_string(line_no) + ": " + what);
}

inline double parse_field(std::string_view field, std::size_t line_no)
{
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end)
        malformed(line_no, "cannot parse number '" + std::string(field) + "'");
    return v;
}

} // namespace detail

/// Reads a dataset; MalformedData errors carry the 1-based line number.
inline Dataset read_dataset_csv(std::istream& in)
{
    Dataset data;
    std::string raw;
    std::size_t line_no = 0;
    std::size_t phases = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = detail::split_fields(line);
        if (!have_header) {
            if (fields.size() < 3 || fields.size() % 2 == 0)
                detail::malformed(line_no, "header must read a1,...,an,s1,...,sn,measured");
            phases = (fields.size() - 1) / 2;
            for (std::size_t k = 0; k < phases; ++k) {
                if (fields[k] != "a" + std::to_string(k + 1) ||
                    fields[phases + k] != "s" + std::to_string(k + 1))
                    detail::malformed(line_no, "header must read a1,...,an,s1,...,sn,measured");
            }
            if (fields.back() != "measured")
                detail::malformed(line_no, "last header column must be 'measured'");
            have_header = true;
            continue;
        }
        if (fields.size() != 2 * phases + 1)
            detail::malformed(line_no, "expected " + std::to_string(2 * phases + 1) + " fields, got " +
                                           std::to_string(fields.size()));
        std::vector<double> fractions, vals;
        for (std::size_t k = 0; k < phases; ++k) {
            fractions.push_back(detail::parse_field(fields[k], line_no));
            vals.push_back(detail::parse_field(fields[phases + k], line_no));
        }
        const double measured = detail::parse_field(fields.back(), line_no);
        try {
            data.emplace_back(Composition(std::move(fractions)), std::move(vals), measured);
        } catch (const Error& e) {
            detail::malformed(line_no, e.what());
        }
    }
    if (data.empty())
        detail::raise(Errc::EmptyDataset, "dataset has no samples");
    return data;
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    if (data.empty())
        detail::raise(Errc::EmptyDataset, "dataset has no samples");
    const std::size_t n = data.front().comp().size();
    for (std::size_t k = 0; k < n; ++k)
        out << 'a' << k + 1 << ',';
    for (std::size_t k = 0; k < n; ++k)
        out << 's' << k + 1 << ',';
    out << "measured\n";
    for (const auto& s : data) {
        if (s.comp().size() != n)
            detail::raise(Errc::LengthMismatch, "all samples must have the same number of phases");
        for (double a : s.comp().fractions())
            out << format_double(a) << ',';
        for (double v : s.vals())
            out << format_double(v) << ',';
        out << format_double(s.measured()) << '\n';
    }
}

} // namespace mixlaw
