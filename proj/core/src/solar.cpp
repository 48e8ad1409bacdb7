#include "skylabel/solar.hpp"

#include "skylabel/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace skylabel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;
// Standard sunrise/sunset zenith: 90 deg plus refraction and solar radius.
constexpr double kZenithRad = 90.833 * kDegToRad;

struct SolarAngles {
    double eqtime_min;  ///< equation of time, minutes
    double decl_rad;    ///< solar declination
};

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

/// Low-accuracy solar angles at a UTC instant: truncated Fourier series in
/// the fractional year.
SolarAngles solar_angles(UtcTime t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const CivilDate date{day};
    const int year = int(date.year());
    const sys_days jan1{CivilDate{std::chrono::year{year}, January, std::chrono::day{1}}};
    const double doy = double((day - jan1).count()); // 0-based day of year
    const double hour = duration<double, std::ratio<3600>>(t - day).count();
    const double year_len = is_leap(year) ? 366.0 : 365.0;

    const double g = 2.0 * kPi / year_len * (doy + (hour - 12.0) / 24.0);

    SolarAngles a;
    a.eqtime_min = 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                             0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
    a.decl_rad = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                 0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                 0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);
    return a;
}

/// Half day-arc in degrees of hour angle at the sunrise/sunset zenith.
double half_arc_deg(double lat_rad, double decl_rad) {
    const double cos_ha = std::cos(kZenithRad) / (std::cos(lat_rad) * std::cos(decl_rad)) -
                          std::tan(lat_rad) * std::tan(decl_rad);
    if (cos_ha < -1.0 || cos_ha > 1.0)
        throw UnsupportedLatitude("sun does not rise or set at this latitude/date");
    return std::acos(cos_ha) / kDegToRad;
}

// whole-second resolution: the model itself is only good to a minute or two
UtcTime at_utc_minutes(CivilDate date, double minutes) {
    using namespace std::chrono;
    return UtcTime{sys_days{date}} + round<seconds>(duration<double, std::ratio<60>>{minutes});
}

} // namespace

SolarEvents solar_events(const GeoPoint& p, CivilDate date) {
    validate(p);
    if (!date.ok())
        throw InvalidInput("invalid civil date");
    if (std::abs(p.lat_deg) >= 66.0)
        throw UnsupportedLatitude("latitude " + std::to_string(p.lat_deg) +
                                  " is inside the polar-circle exclusion (|lat| < 66)");

    const double lat_rad = p.lat_deg * kDegToRad;

    // Solar noon in UTC minutes of `date`, which lands inside the local
    // solar day for any longitude. Two refinement passes re-evaluate the
    // slowly varying angles at the event estimate itself.
    double noon_min = 720.0 - 4.0 * p.lon_deg;
    for (int pass = 0; pass < 2; ++pass) {
        const SolarAngles a = solar_angles(at_utc_minutes(date, noon_min));
        noon_min = 720.0 - 4.0 * p.lon_deg - a.eqtime_min;
    }

    double rise_min = noon_min;
    double set_min = noon_min;
    for (int pass = 0; pass < 2; ++pass) {
        const SolarAngles ar = solar_angles(at_utc_minutes(date, rise_min));
        rise_min = 720.0 - 4.0 * p.lon_deg - ar.eqtime_min - 4.0 * half_arc_deg(lat_rad, ar.decl_rad);
        const SolarAngles as = solar_angles(at_utc_minutes(date, set_min));
        set_min = 720.0 - 4.0 * p.lon_deg - as.eqtime_min + 4.0 * half_arc_deg(lat_rad, as.decl_rad);
    }

    SolarEvents ev;
    ev.date = date;
    ev.sunrise_utc = at_utc_minutes(date, rise_min);
    ev.solar_noon_utc = at_utc_minutes(date, noon_min);
    ev.sunset_utc = at_utc_minutes(date, set_min);
    return ev;
}

DaytimeWindow daytime_window(const SolarEvents& ev, const WindowPolicy& policy) {
    DaytimeWindow w;
    if (policy.mode == WindowMode::SolarOffset) {
        w.start_utc = ev.sunrise_utc + std::chrono::duration_cast<std::chrono::milliseconds>(
                                           policy.offset_after_sunrise);
        w.end_utc = ev.sunset_utc - std::chrono::duration_cast<std::chrono::milliseconds>(
                                        policy.offset_before_sunset);
    } else {
        const UtcTime midnight = local_midnight_utc(ev.date, policy.utc_offset_hours);
        w.start_utc = midnight + std::chrono::minutes{policy.fixed_start_min};
        w.end_utc = midnight + std::chrono::minutes{policy.fixed_end_min};
    }
    if (w.start_utc >= w.end_utc)
        throw DegenerateWindow("daytime window for " + format_date(ev.date) +
                               " is empty or inverted: [" + format_iso8601(w.start_utc) + ", " +
                               format_iso8601(w.end_utc) + ")");
    return w;
}

std::array<DaytimeWindow, 3> three_day_windows(const GeoPoint& p, CivilDate date,
                                               const WindowPolicy& policy) {
    std::array<DaytimeWindow, 3> out;
    for (int i = -1; i <= 1; ++i) {
        const CivilDate d = shift_date(date, i);
        SolarEvents ev;
        if (policy.mode == WindowMode::SolarOffset) {
            ev = solar_events(p, d);
        } else {
            ev.date = d; // fixed-local windows never consult the sun
        }
        out[static_cast<std::size_t>(i + 1)] = daytime_window(ev, policy);
    }
    for (int i = 0; i < 2; ++i) {
        if (out[i].end_utc > out[i + 1].start_utc)
            throw DegenerateWindow("daytime windows around " + format_date(date) +
                                   " overlap; refusing to pool");
    }
    return out;
}

} // namespace skylabel
