#include "skylabel/time.hpp"

#include "skylabel/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace skylabel {

namespace {

int parse_int_exact(std::string_view s, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(std::string("invalid ") + what + ": '" + std::string(s) + "'");
    return value;
}

CivilDate make_date(int y, int mo, int d, std::string_view text) {
    CivilDate date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                   std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok())
        throw ParseError("invalid calendar date: '" + std::string(text) + "'");
    return date;
}

} // namespace

UtcTime parse_iso8601(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.fff...]Z
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':')
        throw ParseError("invalid ISO 8601 timestamp: '" + std::string(text) + "'");
    if (text.back() != 'Z')
        throw ParseError("timestamp must be UTC with a 'Z' suffix: '" + std::string(text) + "'");

    const int y = parse_int_exact(text.substr(0, 4), "year");
    const int mo = parse_int_exact(text.substr(5, 2), "month");
    const int d = parse_int_exact(text.substr(8, 2), "day");
    const int hh = parse_int_exact(text.substr(11, 2), "hour");
    const int mi = parse_int_exact(text.substr(14, 2), "minute");
    const int ss = parse_int_exact(text.substr(17, 2), "second");
    if (hh > 23 || mi > 59 || ss > 60)
        throw ParseError("invalid time of day: '" + std::string(text) + "'");

    long ms = 0;
    std::string_view rest = text.substr(19, text.size() - 20);
    if (!rest.empty()) {
        if (rest[0] != '.' || rest.size() < 2)
            throw ParseError("invalid fractional seconds: '" + std::string(text) + "'");
        std::string_view digits = rest.substr(1);
        double frac = 0.0, scale = 0.1;
        for (char c : digits) {
            if (c < '0' || c > '9')
                throw ParseError("invalid fractional seconds: '" + std::string(text) + "'");
            frac += (c - '0') * scale;
            scale *= 0.1;
        }
        ms = std::lround(frac * 1000.0);
    }

    const CivilDate date = make_date(y, mo, d, text);
    UtcTime t = std::chrono::sys_days{date};
    t += std::chrono::hours{hh} + std::chrono::minutes{mi} + std::chrono::seconds{ss} +
         std::chrono::milliseconds{ms};
    return t;
}

namespace {

std::string format_clock(UtcTime t, int utc_offset_hours, const std::string& suffix) {
    const auto shifted = t + std::chrono::hours{utc_offset_hours};
    const auto day = std::chrono::floor<std::chrono::days>(shifted);
    const CivilDate date{day};
    auto rem = shifted - day;
    const auto hh = std::chrono::duration_cast<std::chrono::hours>(rem);
    rem -= hh;
    const auto mi = std::chrono::duration_cast<std::chrono::minutes>(rem);
    rem -= mi;
    const auto ss = std::chrono::duration_cast<std::chrono::seconds>(rem);
    rem -= ss;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(rem);

    char buf[40];
    if (ms.count() != 0)
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03d",
                      int(date.year()), unsigned(date.month()), unsigned(date.day()),
                      int(hh.count()), int(mi.count()), int(ss.count()), int(ms.count()));
    else
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                      int(date.year()), unsigned(date.month()), unsigned(date.day()),
                      int(hh.count()), int(mi.count()), int(ss.count()));
    return std::string(buf) + suffix;
}

} // namespace

std::string format_iso8601(UtcTime t) {
    return format_clock(t, 0, "Z");
}

std::string format_local(UtcTime t, int utc_offset_hours) {
    char suffix[16];
    const int off = utc_offset_hours;
    std::snprintf(suffix, sizeof suffix, "%c%02d:00", off < 0 ? '-' : '+', std::abs(off));
    return format_clock(t, off, suffix);
}

CivilDate parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("invalid date, expected YYYY-MM-DD: '" + std::string(text) + "'");
    const int y = parse_int_exact(text.substr(0, 4), "year");
    const int mo = parse_int_exact(text.substr(5, 2), "month");
    const int d = parse_int_exact(text.substr(8, 2), "day");
    return make_date(y, mo, d, text);
}

std::string format_date(CivilDate d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                  unsigned(d.day()));
    return buf;
}

int parse_local_hhmm(std::string_view text) {
    if (text.size() != 5 || text[2] != ':')
        throw ParseError("invalid local time, expected HH:MM: '" + std::string(text) + "'");
    const int hh = parse_int_exact(text.substr(0, 2), "hour");
    const int mm = parse_int_exact(text.substr(3, 2), "minute");
    if (hh > 23 || mm > 59)
        throw ParseError("invalid local time: '" + std::string(text) + "'");
    return hh * 60 + mm;
}

CivilDate local_civil_date(UtcTime t, int utc_offset_hours) {
    const auto shifted = t + std::chrono::hours{utc_offset_hours};
    return CivilDate{std::chrono::floor<std::chrono::days>(shifted)};
}

UtcTime local_midnight_utc(CivilDate d, int utc_offset_hours) {
    return UtcTime{std::chrono::sys_days{d}} - std::chrono::hours{utc_offset_hours};
}

} // namespace skylabel
