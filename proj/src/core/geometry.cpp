// SPDX-License-Identifier: Apache-2.0
#include "geometry.hpp"

#include "error.hpp"
#include "scenario.hpp"

#include <cmath>
#include <string>

namespace rissat {

void validate(const GeoPosition& pos) {
  if (!(pos.lat >= -kPi / 2 && pos.lat <= kPi / 2))
    throw Error(ErrorKind::Domain, "latitude out of range [-pi/2, pi/2]: " + std::to_string(pos.lat));
  if (!(pos.lon >= -kPi && pos.lon < kPi))
    throw Error(ErrorKind::Domain, "longitude out of range [-pi, pi): " + std::to_string(pos.lon));
  if (!(pos.alt >= 0.0))
    throw Error(ErrorKind::Domain, "altitude must be non-negative: " + std::to_string(pos.alt));
}

CartesianPoint geo_to_cartesian(const GeoPosition& pos, double earth_radius) {
  validate(pos);
  if (!(earth_radius > 0.0)) throw Error(ErrorKind::Domain, "earth radius must be positive");
  const double r = earth_radius + pos.alt;
  const double cos_lat = std::cos(pos.lat);
  return {r * cos_lat * std::cos(pos.lon), r * cos_lat * std::sin(pos.lon), r * std::sin(pos.lat)};
}

double euclidean_distance(const CartesianPoint& a, const CartesianPoint& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ScenarioDistances scenario_distances(const Scenario& scenario) {
  if (scenario.panels.empty()) throw Error(ErrorKind::Domain, "scenario has no RIS");

  const double r = scenario.earth_radius;
  const CartesianPoint sat = geo_to_cartesian(scenario.satellite, r);
  const CartesianPoint user = geo_to_cartesian(scenario.user, r);

  auto checked = [](double d, const char* what) {
    if (!(d > 0.0)) throw Error(ErrorKind::Geometry, std::string("degenerate geometry: ") + what);
    return d;
  };

  ScenarioDistances out;
  out.sat_user = checked(euclidean_distance(sat, user), "satellite coincides with user");
  out.sat_ris.reserve(scenario.panels.size());
  out.ris_user.reserve(scenario.panels.size());
  for (std::size_t k = 0; k < scenario.panels.size(); ++k) {
    const CartesianPoint ris = geo_to_cartesian(scenario.panels[k].position, r);
    const std::string idx = std::to_string(k + 1);
    out.sat_ris.push_back(
        checked(euclidean_distance(sat, ris), ("satellite coincides with RIS " + idx).c_str()));
    out.ris_user.push_back(
        checked(euclidean_distance(ris, user), ("RIS " + idx + " coincides with user").c_str()));
  }
  return out;
}

double initial_bearing(const GeoPosition& a, const GeoPosition& b) {
  const double dlon = b.lon - a.lon;
  const double y = std::sin(dlon) * std::cos(b.lat);
  const double x = std::cos(a.lat) * std::sin(b.lat) - std::sin(a.lat) * std::cos(b.lat) * std::cos(dlon);
  return std::atan2(y, x);
}

GeoPosition destination_point(const GeoPosition& origin, double bearing, double distance,
                              double earth_radius) {
  const double delta = distance / earth_radius;
  const double sin_lat = std::sin(origin.lat) * std::cos(delta) +
                         std::cos(origin.lat) * std::sin(delta) * std::cos(bearing);
  const double lat = std::asin(sin_lat);
  const double lon = origin.lon + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(origin.lat),
                                             std::cos(delta) - std::sin(origin.lat) * sin_lat);
  // normalize to [-pi, pi)
  double wrapped = std::fmod(lon + kPi, kTwoPi);
  if (wrapped < 0) wrapped += kTwoPi;
  return {lat, wrapped - kPi, origin.alt};
}

} // namespace rissat
