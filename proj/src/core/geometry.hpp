// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace rissat {

struct Scenario;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDefaultEarthRadius = 6371000.0;

/// Geographic position on a spherical Earth. Angles in radians, altitude in
/// meters above the sphere. Valid ranges: lat in [-pi/2, pi/2], lon in
/// [-pi, pi), alt >= 0.
struct GeoPosition {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;
};

/// Earth-centered Cartesian point, meters.
struct CartesianPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ScenarioDistances {
  double sat_user = 0.0;
  std::vector<double> sat_ris;  // one per RIS
  std::vector<double> ris_user; // one per RIS
};

/// Throws Error(Domain) if the position is outside the valid ranges.
void validate(const GeoPosition& pos);

CartesianPoint geo_to_cartesian(const GeoPosition& pos, double earth_radius);

double euclidean_distance(const CartesianPoint& a, const CartesianPoint& b);

/// All propagation distances of a scenario. Throws Error(Geometry) when two
/// nodes coincide and Error(Domain) when the scenario has no RIS.
ScenarioDistances scenario_distances(const Scenario& scenario);

/// Great-circle initial bearing from a to b (radians, clockwise from north).
double initial_bearing(const GeoPosition& a, const GeoPosition& b);

/// Point reached by travelling `distance` meters along the sphere surface from
/// `origin` with the given initial bearing. Altitude is copied from origin.
GeoPosition destination_point(const GeoPosition& origin, double bearing, double distance,
                              double earth_radius);

} // namespace rissat
