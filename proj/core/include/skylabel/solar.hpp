#pragma once

#include "skylabel/geo.hpp"
#include "skylabel/time.hpp"

#include <array>
#include <chrono>

namespace skylabel {

struct SolarEvents {
    CivilDate date{};
    UtcTime sunrise_utc{};
    UtcTime solar_noon_utc{};
    UtcTime sunset_utc{};
};

enum class WindowMode {
    SolarOffset, ///< [sunrise + offset, sunset - offset]
    FixedLocal,  ///< fixed local-time interval, converted via utc_offset
};

struct WindowPolicy {
    WindowMode mode = WindowMode::SolarOffset;
    std::chrono::seconds offset_after_sunrise{3600};
    std::chrono::seconds offset_before_sunset{3600};
    int fixed_start_min = 8 * 60 + 30; ///< local minutes since midnight
    int fixed_end_min = 20 * 60;
    int utc_offset_hours = 0;
};

/// Half-open interval [start_utc, end_utc) pooling one day's statistics.
struct DaytimeWindow {
    UtcTime start_utc{};
    UtcTime end_utc{};
};

/// Sunrise, solar noon and sunset for the civil date at `p`, where the date
/// is understood in the location's own (solar) day. Low-accuracy solar
/// position model: fractional year, equation of time, declination, hour
/// angle at zenith 90.833 degrees. Throws UnsupportedLatitude inside the
/// polar circles.
SolarEvents solar_events(const GeoPoint& p, CivilDate date);

/// Materializes the policy for one day. Throws DegenerateWindow when the
/// interval comes out empty or inverted.
DaytimeWindow daytime_window(const SolarEvents& ev, const WindowPolicy& policy);

/// Windows for date-1, date and date+1, chronologically ordered and
/// pairwise disjoint.
std::array<DaytimeWindow, 3> three_day_windows(const GeoPoint& p, CivilDate date,
                                               const WindowPolicy& policy);

} // namespace skylabel
