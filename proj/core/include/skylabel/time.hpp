#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace skylabel {

/// UTC instant with millisecond resolution. All timestamps in the toolkit
/// are UTC; local time exists only at the solar-window boundary.
using UtcTime = std::chrono::sys_time<std::chrono::milliseconds>;

using CivilDate = std::chrono::year_month_day;

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff]Z". The trailing 'Z' is required;
/// fractional seconds beyond milliseconds are rounded.
UtcTime parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ", with ".mmm" when the instant has a
/// fractional second.
std::string format_iso8601(UtcTime t);

/// Formats with a fixed-offset suffix, e.g. "2023-02-11T07:30:00+09:00".
std::string format_local(UtcTime t, int utc_offset_hours);

/// Parses "YYYY-MM-DD".
CivilDate parse_date(std::string_view text);

std::string format_date(CivilDate d);

/// Parses "HH:MM" into minutes since local midnight.
int parse_local_hhmm(std::string_view text);

/// Civil date of `t` in the fixed-offset local zone.
CivilDate local_civil_date(UtcTime t, int utc_offset_hours);

/// UTC instant of local midnight opening civil date `d`.
UtcTime local_midnight_utc(CivilDate d, int utc_offset_hours);

inline CivilDate shift_date(CivilDate d, int days) {
    return CivilDate{std::chrono::sys_days{d} + std::chrono::days{days}};
}

} // namespace skylabel
