// SPDX-License-Identifier: Apache-2.0
#include "error.hpp"
#include "geometry.hpp"
#include "scenario.hpp"

#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rissat;

TEST(GeoToCartesian, AxisAlignedPoint) {
  const auto p = geo_to_cartesian({0.0, 0.0, 0.0}, 6371000.0);
  EXPECT_DOUBLE_EQ(p.x, 6371000.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_DOUBLE_EQ(p.z, 0.0);
}

TEST(GeoToCartesian, NorthPole) {
  const auto p = geo_to_cartesian({kPi / 2, 0.0, 0.0}, 6371000.0);
  EXPECT_NEAR(p.x, 0.0, 1e-9);
  EXPECT_NEAR(p.y, 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(p.z, 6371000.0);
}

TEST(GeoToCartesian, HandEvaluatedDiagonal) {
  const auto p = geo_to_cartesian({kPi / 4, kPi / 4, 0.0}, 1.0);
  EXPECT_NEAR(p.x, 0.5, 1e-15);
  EXPECT_NEAR(p.y, 0.5, 1e-15);
  EXPECT_NEAR(p.z, std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(GeoToCartesian, AltitudeAddsToRadius) {
  const auto p = geo_to_cartesian({0.0, kPi / 2, 1000.0}, 6371000.0);
  EXPECT_NEAR(p.y, 6372000.0, 1e-6);
}

TEST(GeoToCartesian, RejectsOutOfRangeAngles) {
  EXPECT_THROW(geo_to_cartesian({2.0, 0.0, 0.0}, 1.0), Error);
  EXPECT_THROW(geo_to_cartesian({0.0, 3.5, 0.0}, 1.0), Error);
  EXPECT_THROW(geo_to_cartesian({0.0, 0.0, -1.0}, 1.0), Error);
  try {
    geo_to_cartesian({-1.7, 0.0, 0.0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
}

TEST(GeoToCartesian, SurfacePointsLieOnSphere) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> lat(-kPi / 2, kPi / 2), lon(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const auto p = geo_to_cartesian({lat(g), lon(g), 0.0}, kDefaultEarthRadius);
    EXPECT_NEAR(std::hypot(p.x, p.y, p.z) / kDefaultEarthRadius, 1.0, 1e-9);
  }
}

TEST(EuclideanDistance, IdentityAndPythagoras) {
  EXPECT_EQ(euclidean_distance({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance({0, 0, 0}, {3, 4, 0}), 5.0);
}

TEST(EuclideanDistance, EquatorialChord) {
  const double R = 6371000.0;
  const auto a = geo_to_cartesian({0.0, 0.0, 0.0}, R);
  const auto b = geo_to_cartesian({0.0, kPi / 2, 0.0}, R);
  EXPECT_NEAR(euclidean_distance(a, b), R * std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(euclidean_distance(a, b), 9.0099e6, 0.0001e6);
}

TEST(EuclideanDistance, SymmetryAndTriangleInequality) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-1e7, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const CartesianPoint a{u(g), u(g), u(g)}, b{u(g), u(g), u(g)}, c{u(g), u(g), u(g)};
    EXPECT_EQ(euclidean_distance(a, b), euclidean_distance(b, a));
    EXPECT_LE(euclidean_distance(a, c), (euclidean_distance(a, b) + euclidean_distance(b, c)) * (1 + 1e-15));
  }
}

namespace {

Scenario one_ris(GeoPosition ris) {
  Scenario s;
  s.user = {0.3, 0.2, 0.0};
  s.satellite = {0.3, 0.2, 550e3};
  s.panels.push_back(RisPanel::uniform(ris, 4));
  return s;
}

} // namespace

TEST(ScenarioDistances, SatelliteOverheadGivesAltitude) {
  const Scenario s = one_ris({0.3001, 0.2, 0.0});
  EXPECT_NEAR(scenario_distances(s).sat_user, 550e3, 1e-6);
}

TEST(ScenarioDistances, RisOnUserIsDegenerate) {
  const Scenario s = one_ris({0.3, 0.2, 0.0});
  try {
    scenario_distances(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Geometry);
  }
}

TEST(ScenarioDistances, NeedsAtLeastOneRis) {
  Scenario s = one_ris({0.3001, 0.2, 0.0});
  s.panels.clear();
  EXPECT_THROW(scenario_distances(s), Error);
}

TEST(ScenarioDistances, MatchesPrimitivesExactly) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 100; ++i) {
    const Scenario s = oracle::random_scenario(g);
    const auto d = scenario_distances(s);
    const auto sat = geo_to_cartesian(s.satellite, s.earth_radius);
    const auto usr = geo_to_cartesian(s.user, s.earth_radius);
    EXPECT_EQ(d.sat_user, euclidean_distance(sat, usr));
    for (std::size_t k = 0; k < s.ris_count(); ++k) {
      const auto r = geo_to_cartesian(s.panels[k].position, s.earth_radius);
      EXPECT_EQ(d.sat_ris[k], euclidean_distance(sat, r));
      EXPECT_EQ(d.ris_user[k], euclidean_distance(r, usr));
      EXPECT_GT(d.ris_user[k], 0.0);
      EXPECT_GE(d.sat_ris[k] + d.ris_user[k], d.sat_user);
    }
  }
}

TEST(ScenarioDistances, LeoLinksAreNearlyEqualForNearbyNodes) {
  Scenario s;
  s.user = {-0.66, 2.53, 0.0};
  s.satellite = {-0.658, 2.535, 550e3};
  for (int k = 0; k < 4; ++k) s.panels.push_back(RisPanel::uniform({-0.66 + 0.0003 * (k + 1), 2.53, 0.0}, 2));
  const auto d = scenario_distances(s);
  for (double sr : d.sat_ris) EXPECT_LT(std::abs(sr - d.sat_user) / d.sat_user, 0.01);
}

TEST(Bearing, DestinationRoundTrip) {
  const GeoPosition a{-0.66, 2.53, 0.0};
  const GeoPosition b = destination_point(a, 1.0, 750.0, kDefaultEarthRadius);
  EXPECT_NEAR(initial_bearing(a, b), 1.0, 1e-6);
  const double arc = euclidean_distance(geo_to_cartesian(a, kDefaultEarthRadius), geo_to_cartesian(b, kDefaultEarthRadius));
  EXPECT_NEAR(arc, 750.0, 1e-3);
}
