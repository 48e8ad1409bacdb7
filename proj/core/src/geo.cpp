#include "skylabel/geo.hpp"

#include "skylabel/errors.hpp"

#include <cmath>
#include <numbers>

namespace skylabel {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void validate(const GeoPoint& p) {
    if (!std::isfinite(p.lat_deg) || !std::isfinite(p.lon_deg))
        throw InvalidInput("geographic coordinates must be finite");
    if (p.lat_deg < -90.0 || p.lat_deg > 90.0)
        throw InvalidInput("latitude out of range [-90, +90]: " + std::to_string(p.lat_deg));
    if (p.lon_deg < -180.0 || p.lon_deg >= 180.0)
        throw InvalidInput("longitude out of range [-180, +180): " + std::to_string(p.lon_deg));
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
    validate(a);
    validate(b);

    const double phi1 = a.lat_deg * kDegToRad;
    const double phi2 = b.lat_deg * kDegToRad;
    const double dphi = (b.lat_deg - a.lat_deg) * kDegToRad;
    const double dlam = (b.lon_deg - a.lon_deg) * kDegToRad;

    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

} // namespace skylabel
