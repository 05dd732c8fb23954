// SPDX-License-Identifier: Apache-2.0
#include "channel.hpp"
#include "config.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "ideal_opt.hpp"
#include "nie_opt.hpp"
#include "rng.hpp"

#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace rissat;

namespace {

Scenario default_scenario() { return ExperimentConfig{}.build_scenario(); }

Scenario small_scenario(std::size_t k = 2, std::size_t n = 4) {
  Scenario s = default_scenario();
  s.panels.resize(k);
  for (auto& p : s.panels) p = RisPanel::uniform(p.position, n);
  return s;
}

std::vector<double> random_theta(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> t(n);
  for (auto& x : t) x = u(g);
  return t;
}

AdamConfig quick_adam(std::uint64_t seed) {
  AdamConfig c;
  c.seed = seed;
  c.mc_samples = 50;
  c.eval_samples = 200;
  c.max_iters = 150;
  return c;
}

} // namespace

TEST(ExpectedEta, NoRandomnessEqualsDeterministicEta) {
  Scenario s = small_scenario();
  s.shadowing.sigma_ru_db = 0.0;
  s.shadowing.mu_ru_db = 1.5;
  const auto theta = random_theta(s.element_count(), 1);
  const std::vector<std::uint8_t> on(theta.size(), 1);
  const double ref = oracle::received(s, theta, {1.5, 1.5}, 0.0, on) / oracle::consumption(s, on);
  EXPECT_LT(oracle::rel_err(expected_eta(s, theta, 64, RngStream{3, 0}), ref), 1e-12);
}

TEST(ExpectedEta, SameSeedSameValue) {
  const Scenario s = default_scenario();
  const auto theta = random_theta(s.element_count(), 2);
  EXPECT_EQ(expected_eta(s, theta, 1, RngStream{8, 1}), expected_eta(s, theta, 1, RngStream{8, 1}));
  EXPECT_EQ(expected_eta(s, theta, 500, RngStream{8, 1}), expected_eta(s, theta, 500, RngStream{8, 1}));
}

TEST(ExpectedEta, MatchesPerDrawOracleAverage) {
  const Scenario s = small_scenario(3, 3);
  const auto theta = random_theta(s.element_count(), 4);
  const auto draws = draw_shadowing(s.shadowing, s.ris_count(), 40, RngStream{6, 6});
  const std::vector<std::uint8_t> on(theta.size(), 1);
  double acc = 0.0;
  for (std::size_t m = 0; m < draws.samples; ++m) {
    std::vector<double> x(s.ris_count());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = draws.ru(m, k);
    acc += oracle::received(s, theta, x, draws.su_db[m], on) / oracle::consumption(s, on);
  }
  EXPECT_LT(oracle::rel_err(expected_eta(s, theta, draws), acc / 40.0), 1e-12);
}

TEST(ExpectedEta, LargeSampleStandardErrorIsSmall) {
  const Scenario s = default_scenario();
  const auto theta = random_theta(s.element_count(), 5);
  const std::size_t batches = 100, per = 1000;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = expected_eta(s, theta, per, RngStream{11, b});
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= (batches - 1);
  EXPECT_LT(std::sqrt(var / batches) / mu, 0.01);
}

TEST(McGradient, VanishesAtCophasedPointWithoutRandomness) {
  Scenario s = default_scenario();
  s.shadowing.sigma_ru_db = 0.0;
  const auto theta = optimal_phases(s);
  const auto g = mc_gradient(s, theta, 4, RngStream{1, 1});
  const double eta = expected_eta(s, theta, 4, RngStream{1, 1});
  for (double x : g) EXPECT_LT(std::abs(x) / eta, 1e-8);
}

TEST(McGradient, AgreesWithFiniteDifferences) {
  const Scenario s = small_scenario(3, 4);
  const auto draws = draw_shadowing(s.shadowing, s.ris_count(), 300, RngStream{2, 9});
  const double h = 1e-6;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const auto theta = random_theta(s.element_count(), 100 + trial);
    const auto g = mc_gradient(s, theta, draws);
    double scale = 0.0;
    std::vector<double> fd(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      auto up = theta, dn = theta;
      up[i] += h;
      dn[i] -= h;
      fd[i] = (expected_eta(s, up, draws) - expected_eta(s, dn, draws)) / (2 * h);
      scale = std::max(scale, std::abs(fd[i]));
    }
    for (std::size_t i = 0; i < theta.size(); ++i) EXPECT_LT(std::abs(g[i] - fd[i]) / scale, 1e-4);
  }
}

TEST(McGradient, SingleElementSignFollowsPhaseOffset) {
  Scenario s = small_scenario(1, 1);
  s.shadowing.sigma_ru_db = 0.0;
  const auto l = oracle::link(s);
  const double phi_su = oracle::wrap_phase(l.d_su, l.lambda);
  const double base = oracle::wrap_phase(l.d_sr[0], l.lambda) + oracle::wrap_phase(l.d_ru[0], l.lambda);
  for (double theta : {0.3, 1.7, 2.9, 4.0, 5.5}) {
    const std::vector<double> t{theta};
    const double g = mc_gradient(s, t, 1, RngStream{0, 0})[0];
    const double sn = std::sin(phi_su - (base + theta));
    if (std::abs(sn) > 1e-6) EXPECT_EQ(g > 0, sn > 0) << "theta=" << theta;
  }
}

TEST(AdamStep, FirstStepBiasCorrectionIsExact) {
  AdamConfig c;
  const std::vector<double> g{0.3, -2.0, 1e-3, 7.5};
  AdamState st = AdamState::start({1.0, 2.0, 3.0, 4.0});
  const auto next = adam_step(st, g, c);
  EXPECT_EQ(next.t, 1u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(next.m_hat[i], g[i]);
    EXPECT_EQ(next.v_hat[i], g[i] * g[i]);
    EXPECT_NEAR(next.m[i] / (1.0 - c.beta1), g[i], 1e-15 * std::abs(g[i]));
    EXPECT_EQ(next.theta[i], st.theta[i] + c.learning_rate * g[i] / (std::abs(g[i]) + c.epsilon));
  }
}

TEST(AdamStep, ZeroGradientIsFixedPoint) {
  AdamConfig c;
  AdamState st = AdamState::start({0.0, 1.0, kTwoPi, 3.3});
  const auto start = st.theta;
  const std::vector<double> zero(4, 0.0);
  for (int i = 0; i < 100; ++i) st = adam_step(std::move(st), zero, c);
  EXPECT_EQ(st.theta, start);
}

TEST(AdamStep, ClipAndWrap) {
  AdamConfig c;
  c.learning_rate = 1.0;
  AdamState st = AdamState::start({6.0, 0.2});
  const std::vector<double> g{1.0, -1.0};
  auto clipped = adam_step(st, g, c);
  EXPECT_EQ(clipped.theta[0], kTwoPi);
  EXPECT_EQ(clipped.theta[1], 0.0);
  c.boundary = PhaseBoundary::Wrap;
  auto wrapped = adam_step(st, g, c);
  EXPECT_NEAR(wrapped.theta[0], 7.0 - kTwoPi, 1e-7);
  EXPECT_NEAR(wrapped.theta[1], kTwoPi - 0.8, 1e-7);
}

TEST(AdamStep, EffectiveRateBounds) {
  AdamConfig c;
  AdamState st = AdamState::start({1.0, 1.0});
  const std::vector<double> g{0.5, -3.0};
  st = adam_step(st, g, c);
  const double a = effective_learning_rate(st, c);
  EXPECT_GT(a, 0.0);
  EXPECT_LE(a, c.learning_rate / c.epsilon);
  for (double v : st.v) EXPECT_GE(v, 0.0);
}

TEST(AdamConfig, Validation) {
  AdamConfig c;
  c.beta1 = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.mc_samples = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(OptimizeNie, AscendsAndIsReproducible) {
  const Scenario s = small_scenario(2, 6);
  const auto a = optimize_nie(s, quick_adam(31));
  const auto b = optimize_nie(s, quick_adam(31));
  EXPECT_GE(a.final_expected_eta, a.initial_expected_eta);
  EXPECT_EQ(a.theta, b.theta);
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  EXPECT_LE(a.trace.records.size(), quick_adam(31).max_iters);
  for (double t : a.theta) {
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, kTwoPi);
  }
}

TEST(OptimizeNie, RejectsWrongStartLength) {
  const Scenario s = small_scenario();
  EXPECT_THROW(optimize_nie(s, quick_adam(1), std::vector<double>(3, 0.0)), Error);
}

TEST(SelectBestRis, SinglePanel) {
  const Scenario s = small_scenario(1, 4);
  EXPECT_EQ(select_best_ris(s, random_theta(4, 1)), 0u);
}

TEST(SelectBestRis, DeadPanelLoses) {
  Scenario s = small_scenario(2, 4);
  std::fill(s.panels[0].gamma.begin(), s.panels[0].gamma.end(), 1e-300);
  const auto theta = optimal_phases(s);
  EXPECT_EQ(select_best_ris(s, theta), 1u);
  EXPECT_EQ(select_best_ris(s, theta, RisSelection::Joint), 1u);
}

TEST(SelectBestRis, MatchesBruteForceOnDefault) {
  const Scenario s = default_scenario();
  const auto theta = random_theta(s.element_count(), 12);
  std::size_t best = 0;
  double best_eta = -1.0;
  for (std::size_t k = 0; k < s.ris_count(); ++k) {
    const Scenario one = s.isolate(k);
    const std::vector<double> slice(theta.begin() + static_cast<long>(s.offset(k)),
                                    theta.begin() + static_cast<long>(s.offset(k) + one.element_count()));
    const std::vector<std::uint8_t> on(slice.size(), 1);
    const double eta = oracle::received(one, slice, {one.shadowing.mu_ru_db}, one.shadowing.mu_su_db, on) /
                       oracle::consumption(one, on);
    if (eta > best_eta) {
      best_eta = eta;
      best = k;
    }
  }
  EXPECT_EQ(select_best_ris(s, theta), best);
}

TEST(PerRisMax, RowsMatchIsolatedReruns) {
  const Scenario s = small_scenario(3, 3);
  const auto cfg = quick_adam(8);
  const auto rows = per_ris_max_eta(s, cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].k, k);
    const auto rerun = optimize_nie(s.isolate(k), cfg);
    EXPECT_LT(oracle::rel_err(rows[k].max_expected_eta, rerun.final_expected_eta), 1e-12);
    EXPECT_GE(rows[k].mean_phase, 0.0);
    EXPECT_LE(rows[k].mean_phase, kTwoPi);
  }
}

TEST(ExpectedEta, ArgmaxMatchesReceivedPowerArgmax) {
  // Consumption does not depend on phases, so both objectives rank a grid
  // of phase vectors identically.
  const Scenario s = small_scenario(1, 2);
  const auto draws = draw_shadowing(s.shadowing, 1, 100, RngStream{4, 4});
  const std::vector<std::uint8_t> on(2, 1);
  double best_eta = -1, best_p = -1;
  std::size_t arg_eta = 0, arg_p = 0, idx = 0;
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j, ++idx) {
      const std::vector<double> t{kTwoPi * i / 24.0, kTwoPi * j / 24.0};
      const double eta = expected_eta(s, t, draws);
      double p = 0.0;
      for (std::size_t m = 0; m < draws.samples; ++m) p += oracle::received(s, t, {draws.ru(m, 0)}, draws.su_db[m], on);
      if (eta > best_eta) best_eta = eta, arg_eta = idx;
      if (p > best_p) best_p = p, arg_p = idx;
    }
  }
  EXPECT_EQ(arg_eta, arg_p);
}
