#pragma once

namespace skylabel {

/// Mean Earth radius used by the spherical geodesy here.
inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint {
    double lat_deg = 0.0; ///< degrees north, [-90, +90]
    double lon_deg = 0.0; ///< degrees east, [-180, +180)
};

/// Throws InvalidInput if a coordinate is non-finite or out of bounds.
void validate(const GeoPoint& p);

/// Haversine distance in meters on a sphere of radius kEarthRadiusM.
double great_circle_distance(const GeoPoint& a, const GeoPoint& b);

} // namespace skylabel
