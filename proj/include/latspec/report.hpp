#pragma once

#include "latspec/efimov.hpp"
#include "latspec/spectrum.hpp"

#include <string>
#include <utility>
#include <vector>

namespace latspec {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { Csv, Json };

/// "csv" or "json", else InvalidArgument.
Format parse_format(const std::string& s);

/// %.12g, with nan/inf spelled out. Locale independent.
std::string format_number(double x);

/// Columns: m_minus_z,z,count,det_min,hs_norm,hs_diff,trusted
std::string count_report_csv(const CountReport& r);
/// {"meta": {...}, "rows": [...]} with the CSV column names.
std::string count_report_json(const CountReport& r);
/// Reads either serialization back (format from the first non-blank character).
CountReport parse_count_report(const std::string& text);
CountReport read_count_report(const std::string& path);

/// Columns: channel,node,p1,p2,p3,z,m_alpha
std::string essential_csv(const EssentialSpectrumReport& r);
std::string essential_json(const EssentialSpectrumReport& r);

/// Columns: l,lambda,value
std::string mode_table_csv(const std::vector<ModeRow>& rows);
/// Columns: mu,value
std::string u_curve_csv(const std::vector<std::pair<double, double>>& curve);

/// Writes text to path, or stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

} // namespace latspec
