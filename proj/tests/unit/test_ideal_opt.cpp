// SPDX-License-Identifier: Apache-2.0
#include "channel.hpp"
#include "config.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "ideal_opt.hpp"
#include "rng.hpp"

#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace rissat;

namespace {

Scenario default_scenario() { return ExperimentConfig{}.build_scenario(); }

double power_at(const Scenario& s, const std::vector<double>& theta) {
  const auto mean = mean_shadowing(s);
  return oracle::received(s, theta, mean.ru_db, mean.su_db, s.state_vector());
}

} // namespace

TEST(OptimalPhases, SingleElementAlignsWithDirectPath) {
  Scenario s = default_scenario();
  s.panels.resize(1);
  s.panels[0] = RisPanel::uniform(s.panels[0].position, 1);
  const auto l = oracle::link(s);
  const double phi_su = oracle::wrap_phase(l.d_su, l.lambda);
  const double base = oracle::wrap_phase(l.d_sr[0], l.lambda) + oracle::wrap_phase(l.d_ru[0], l.lambda);
  const double expected = std::fmod(std::fmod(phi_su - base, kTwoPi) + kTwoPi, kTwoPi);
  EXPECT_NEAR(optimal_phases(s)[0], expected, 1e-9);
}

TEST(OptimalPhases, AttainsCoherentBound) {
  std::mt19937_64 g(17);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = oracle::random_scenario(g);
    const auto mean = mean_shadowing(s);
    double a_ru = 0.0;
    for (std::size_t k = 0; k < s.ris_count(); ++k)
      for (std::size_t n = 0; n < s.panels[k].size(); ++n) a_ru += oracle::element_amp(s, k, n, mean.ru_db[k]);
    const double a_su = std::abs(oracle::direct(s, mean.su_db));
    const double bound = s.rf.tx_power_w * (a_ru + a_su) * (a_ru + a_su);
    EXPECT_LT(oracle::rel_err(power_at(s, optimal_phases(s)), bound), 1e-9);
  }
}

TEST(OptimalPhases, BeatsRandomPhases) {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const Scenario s = oracle::random_scenario(g);
  const double best = power_at(s, optimal_phases(s));
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> theta(s.element_count());
    for (auto& t : theta) t = u(g);
    EXPECT_LE(power_at(s, theta), best * (1 + 1e-9));
  }
}

TEST(SelectiveDiversity, Cases) {
  const std::vector<double> one{5.0}, three{1.0, 3.0, 2.0}, tie{2.0, 2.0};
  EXPECT_EQ(selective_diversity(one).index, 0u);
  EXPECT_EQ(selective_diversity(one).power_w, 5.0);
  EXPECT_EQ(selective_diversity(three).index, 1u);
  EXPECT_EQ(selective_diversity(three).power_w, 3.0);
  EXPECT_EQ(selective_diversity(tie).index, 0u);
  EXPECT_THROW(selective_diversity(std::vector<double>{}), Error);
}

TEST(PerRisPower, EqualsIsolatedCophasedPower) {
  const Scenario s = default_scenario();
  const auto p = per_ris_cophased_power(s);
  ASSERT_EQ(p.size(), s.ris_count());
  for (std::size_t k = 0; k < s.ris_count(); ++k) {
    const Scenario one = s.isolate(k);
    EXPECT_LT(oracle::rel_err(p[k], power_at(one, optimal_phases(one))), 1e-12);
  }
  EXPECT_EQ(selective_diversity(p).index, static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()));
}

TEST(Sigmoid, Values) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(1.0), 0.7310585786300049, 1e-15);
  EXPECT_EQ(sigmoid(800.0), 1.0);
  EXPECT_LT(sigmoid(-1.0), sigmoid(-0.5));
}

TEST(BpsoStep, FrozenSwarmCollapsesToZero) {
  BpsoConfig cfg;
  cfg.inertia = 0.0;
  cfg.cognitive = 0.0;
  cfg.social = 0.0;
  cfg.swarm_size = 5;
  const BinaryFitness f = [](std::span<const std::uint8_t> s) {
    return static_cast<double>(std::count(s.begin(), s.end(), 1));
  };
  const RngStream rng{1, 2};
  BpsoState st = bpso_init(12, f, cfg, rng);
  st = bpso_step(std::move(st), f, cfg, rng);
  for (double v : st.velocities) EXPECT_EQ(v, 0.0);
  for (auto b : st.positions) EXPECT_EQ(b, 0);
}

TEST(BpsoStep, IncumbentNeverWorsensAndPositionsStayBinary) {
  BpsoConfig cfg;
  const std::vector<double> w{3, -1, 4, -1, 5, -9, 2, 6, -5, 3, -5, 8};
  const BinaryFitness f = [&](std::span<const std::uint8_t> s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] * w[i];
    return acc;
  };
  const RngStream rng{42, 0};
  BpsoState st = bpso_init(w.size(), f, cfg, rng);
  for (int it = 0; it < 50; ++it) {
    const double before = st.global_best_fitness;
    st = bpso_step(std::move(st), f, cfg, rng);
    EXPECT_LE(st.global_best_fitness, before);
    for (auto b : st.positions) EXPECT_LE(b, 1);
    for (std::size_t i = 0; i < st.swarm; ++i) EXPECT_LE(st.global_best_fitness, st.personal_best_fitness[i]);
  }
}

TEST(BpsoMinimize, PureObjectiveFindsAllOff) {
  Scenario s = default_scenario();
  s.panels.resize(2);
  for (auto& p : s.panels) p = RisPanel::uniform(p.position, 4);
  BpsoConfig cfg;
  cfg.seed = 9;
  ActivationObjective obj;
  const auto r = bpso_minimize(s, cfg, obj);
  EXPECT_EQ(r.best.active_count(), 0u);
  EXPECT_EQ(r.best_fitness, s.rf.tx_power_w + 2 * s.consumption.circuit_w);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(BpsoMinimize, SeedDeterministic) {
  const Scenario s = default_scenario();
  BpsoConfig cfg;
  cfg.seed = 77;
  cfg.max_iters = 20;
  ActivationObjective obj;
  const auto a = bpso_minimize(s, cfg, obj);
  const auto b = bpso_minimize(s, cfg, obj);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(BpsoMinimize, ConstrainedSymmetricNeedsExactlyM) {
  // Identical elements on one panel: the floor is set between m-1 and m
  // co-phased elements, so the optimum has exactly m active.
  Scenario s = default_scenario();
  s.panels.resize(1);
  s.panels[0] = RisPanel::uniform(s.panels[0].position, 10);
  s.panels[0].gain_in = s.panels[0].gain_out = 3e3; // make the RIS matter
  const auto theta = optimal_phases(s);
  const std::size_t m = 4;
  auto power_with = [&](std::size_t active) {
    std::vector<std::uint8_t> st(10, 0);
    std::fill_n(st.begin(), active, 1);
    return oracle::received(s, theta, {0.0}, 0.0, st);
  };
  ActivationObjective obj;
  obj.mode = ActivationMode::Constrained;
  obj.phases = theta;
  obj.min_received_power_w = 0.5 * (power_with(m - 1) + power_with(m));
  BpsoConfig cfg;
  cfg.seed = 5;
  const auto r = bpso_minimize(s, cfg, obj);
  EXPECT_EQ(r.best.active_count(), m);
}

TEST(IeOptimize, DeadReflectorsGiveDirectOnlyEfficiency) {
  Scenario s = default_scenario();
  for (auto& p : s.panels) std::fill(p.gamma.begin(), p.gamma.end(), 1e-300);
  IeOptions o;
  o.bpso.seed = 3;
  const auto r = ie_optimize(s, o);
  const double direct = s.rf.tx_power_w * std::norm(oracle::direct(s, 0.0));
  EXPECT_LT(oracle::rel_err(r.eta_star, direct / (s.rf.tx_power_w + 4 * s.consumption.circuit_w)), 1e-12);
  EXPECT_EQ(r.activation.active_count(), 0u);
}

TEST(IeOptimize, FartherReflectorsCannotHelp) {
  Scenario s = default_scenario();
  IeOptions o;
  o.bpso.seed = 3;
  const auto near = ie_optimize(s, o);
  const auto user = geo_to_cartesian(s.user, s.earth_radius);
  for (auto& p : s.panels) {
    const double d = euclidean_distance(user, geo_to_cartesian(p.position, s.earth_radius));
    p.position = destination_point(s.user, initial_bearing(s.user, p.position), 2.0 * d, s.earth_radius);
  }
  const auto far = ie_optimize(s, o);
  EXPECT_LE(far.eta_star, near.eta_star);
  EXPECT_LE(far.eta_cophased_all_active, near.eta_cophased_all_active);
}

TEST(IeOptimize, KStarIsSelectiveDiversityChoice) {
  const Scenario s = default_scenario();
  IeOptions o;
  o.bpso.seed = 1;
  const auto r = ie_optimize(s, o);
  EXPECT_EQ(r.k_star, selective_diversity(per_ris_cophased_power(s)).index);
  EXPECT_GE(r.eta_star, r.eta_baseline);
}

TEST(ActiveElements, EndpointsAndMonotoneOptimizedCurve) {
  const Scenario s = default_scenario();
  const auto pts = eta_vs_active_elements(s);
  ASSERT_EQ(pts.size(), s.element_count() + 1);
  EXPECT_EQ(pts.front().eta_baseline, pts.front().eta_optimized);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i].eta_optimized, pts[i].eta_baseline);
}
