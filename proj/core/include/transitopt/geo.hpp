#pragma once

namespace transitopt {

inline constexpr double kEarthRadiusMeters = 6371000.0;

struct LatLon {
  double lat = 0.0;  // decimal degrees, [-90, 90]
  double lon = 0.0;  // decimal degrees, [-180, 180]
};

/// Throws InputError if the coordinate is outside the valid ranges.
void validate_coordinate(const LatLon& p);

/// Great-circle distance in meters between two points.
/// Symmetric and non-negative; throws InputError on out-of-range input.
double haversine_distance(const LatLon& a, const LatLon& b);

/// Point displaced by the given local east/north offsets in meters.
/// Accurate for the sub-kilometer offsets used when perturbing instances.
LatLon offset_by_meters(const LatLon& p, double east_m, double north_m);

}  // namespace transitopt
