#pragma once

// Text and CSV rendering of scenario rows.

#include "thzcoh/error.hpp"
#include "thzcoh/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace thzcoh {

enum class OutputFormat { text, csv };

inline OutputFormat parse_output_format(std::string_view name)
{
    if (name == "text") {
        return OutputFormat::text;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    throw ValidationError("unknown output format '" + std::string(name) + "' (expected text or csv)");
}

/// Fixed-width scientific notation; NaN prints as "nan".
inline std::string format_number(double v, int digits = 6)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

inline std::string csv_escape(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

namespace detail {

struct RowField {
    const char* name;
    const char* unit;
    double ReportRow::*member;
};

inline constexpr RowField kRowFields[] = {
    {"sigma_max", "", &ReportRow::sigma_max},
    {"pulse_area", "rad", &ReportRow::pulse_area},
    {"decay_rate", "s^-1", &ReportRow::decay_rate},
    {"e_thz", "J", &ReportRow::e_thz},
    {"peak_field", "V/m", &ReportRow::peak_field},
    {"omega_0", "s^-1", &ReportRow::omega_0},
    {"i_peak", "W/m^2", &ReportRow::i_peak},
    {"e_opt_pulse", "J", &ReportRow::e_opt_pulse},
    {"absorbed_fraction", "", &ReportRow::absorbed_fraction},
    {"e_opt_total", "J", &ReportRow::e_opt_total},
    {"efficiency", "", &ReportRow::efficiency},
    {"efficiency_absorbed", "", &ReportRow::efficiency_absorbed},
    {"efficiency_limit", "", &ReportRow::efficiency_limit},
    {"damage_margin", "", &ReportRow::damage_margin},
};

} // namespace detail

inline void write_rows_csv(std::ostream& out, const std::vector<ReportRow>& rows)
{
    out << "label,material,drive";
    for (const auto& f : detail::kRowFields) {
        out << ',' << f.name;
    }
    out << ",damage,flags,error\n";
    for (const auto& r : rows) {
        out << csv_escape(r.label) << ',' << csv_escape(r.material) << ',' << r.drive;
        for (const auto& f : detail::kRowFields) {
            out << ',' << format_number(r.*(f.member));
        }
        out << ',' << r.damage << ',' << csv_escape(join(r.flags, "; ")) << ',' << csv_escape(r.error) << '\n';
    }
}

/// One "name = value unit" block per row.
inline void write_rows_text(std::ostream& out, const std::vector<ReportRow>& rows)
{
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i > 0) {
            out << '\n';
        }
        out << "[" << r.label << "]\n";
        if (!r.error.empty()) {
            out << "  error               = " << r.error << '\n';
            continue;
        }
        char line[160];
        std::snprintf(line, sizeof line, "  %-19s = %s\n", "material", r.material.c_str());
        out << line;
        std::snprintf(line, sizeof line, "  %-19s = %s\n", "drive", r.drive.c_str());
        out << line;
        for (const auto& f : detail::kRowFields) {
            std::snprintf(line, sizeof line, "  %-19s = %s%s%s\n", f.name, format_number(r.*(f.member)).c_str(),
                          f.unit[0] != '\0' ? " " : "", f.unit);
            out << line;
        }
        std::snprintf(line, sizeof line, "  %-19s = %s\n", "damage", r.damage.c_str());
        out << line;
        for (const auto& flag : r.flags) {
            out << "  warning: " << flag << '\n';
        }
    }
}

inline void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, OutputFormat format)
{
    if (format == OutputFormat::csv) {
        write_rows_csv(out, rows);
    } else {
        write_rows_text(out, rows);
    }
}

} // namespace thzcoh
