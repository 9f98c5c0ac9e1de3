#include "transitopt/geo.hpp"

#include <cmath>
#include <string>

#include "transitopt/errors.hpp"

namespace transitopt {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

void validate_coordinate(const LatLon& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0)) {
    throw InputError("latitude out of range [-90, 90]: " + std::to_string(p.lat));
  }
  if (!(p.lon >= -180.0 && p.lon <= 180.0)) {
    throw InputError("longitude out of range [-180, 180]: " + std::to_string(p.lon));
  }
}

double haversine_distance(const LatLon& a, const LatLon& b) {
  validate_coordinate(a);
  validate_coordinate(b);
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = (b.lat - a.lat) * kDegToRad;
  const double dlon = (b.lon - a.lon) * kDegToRad;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

LatLon offset_by_meters(const LatLon& p, double east_m, double north_m) {
  LatLon out = p;
  out.lat += north_m / kEarthRadiusMeters / kDegToRad;
  out.lon += east_m / (kEarthRadiusMeters * std::cos(p.lat * kDegToRad)) / kDegToRad;
  return out;
}

}  // namespace transitopt
