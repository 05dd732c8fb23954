// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "channel.hpp"
#include "rng.hpp"
#include "scenario.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rissat {

enum class PhaseBoundary {
  Clip, // clamp to [0, 2pi]
  Wrap, // reduce modulo 2pi
};

enum class RisSelection {
  Isolated, // each RIS evaluated as if it were the only one
  Joint,    // RIS whose removal from the joint configuration costs the most
};

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t mc_samples = 200;
  std::size_t eval_samples = 2000; // fixed draws used to track E[eta]
  std::size_t max_iters = 500;
  double convergence_tol = 1e-6;   // relative change in tracked E[eta]
  std::size_t patience = 10;
  PhaseBoundary boundary = PhaseBoundary::Clip;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AdamState {
  std::vector<double> theta;
  std::vector<double> m;     // raw first moment
  std::vector<double> v;     // raw second moment
  std::vector<double> m_hat; // bias-corrected moments of the latest step
  std::vector<double> v_hat;
  std::uint64_t t = 0;

  static AdamState start(std::vector<double> theta);
};

struct TraceRecord {
  std::size_t iteration = 0;
  double expected_eta = 0.0;
  double mean_phase = 0.0;
  double effective_alpha = 0.0; // element mean of alpha / (sqrt(v_hat) + eps)
};

struct RunTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
};

/// Monte Carlo shadowing draws, M rows of (su_db, ru_db per RIS). Draw m is
/// generated from its own counter-derived stream.
struct ShadowDraws {
  std::size_t samples = 0;
  std::size_t ris = 0;
  std::vector<double> su_db;
  std::vector<double> ru_db; // samples x ris

  double ru(std::size_t m, std::size_t k) const { return ru_db[m * ris + k]; }
};

ShadowDraws draw_shadowing(const ShadowingModel& model, std::size_t ris_count, std::size_t samples,
                           const RngStream& rng);

/// (1/M) sum_m eta(theta, draw m) with every element active.
double expected_eta(const Scenario& scenario, std::span<const double> theta, const ShadowDraws& draws);
double expected_eta(const Scenario& scenario, std::span<const double> theta, std::size_t samples,
                    const RngStream& rng);

/// (1/M) sum_m d eta(theta, draw m) / d theta with every element active,
/// using the closed-form per-draw derivative
///   dP_R/dphi_kn = 2 P_t a_kn Im(conj(S) exp(-j psi_kn)),
/// where S is the total received signal and psi_kn the element's total phase.
std::vector<double> mc_gradient(const Scenario& scenario, std::span<const double> theta,
                                const ShadowDraws& draws);
std::vector<double> mc_gradient(const Scenario& scenario, std::span<const double> theta,
                                std::size_t samples, const RngStream& rng);

/// One Adam ascent step (t incremented first, then bias correction).
AdamState adam_step(AdamState state, std::span<const double> grad, const AdamConfig& cfg);

/// Mean over elements of alpha / (sqrt(v_hat) + eps) for the current state.
double effective_learning_rate(const AdamState& state, const AdamConfig& cfg);

struct NieResult {
  std::vector<double> theta;
  RunTrace trace;
  double initial_expected_eta = 0.0;
  double initial_mean_phase = 0.0;
  double final_expected_eta = 0.0;
  double gradient_scale = 0.0; // positive constant applied before Adam
};

/// Adam ascent on E[eta] from a random start in [0, 2pi].
NieResult optimize_nie(const Scenario& scenario, const AdamConfig& cfg);
/// Same from an explicit starting phase vector.
NieResult optimize_nie(const Scenario& scenario, const AdamConfig& cfg, std::vector<double> theta0);

/// Index (0-based) of the most efficient RIS for the given phases, at mean
/// shadowing. Ties go to the lowest index.
std::size_t select_best_ris(const Scenario& scenario, std::span<const double> theta_star,
                            RisSelection mode = RisSelection::Isolated);

struct PerRisMax {
  std::size_t k = 0; // 0-based
  double max_expected_eta = 0.0;
  double mean_phase = 0.0;
  std::vector<double> theta;
};

/// Runs optimize_nie on each RIS in isolation.
std::vector<PerRisMax> per_ris_max_eta(const Scenario& scenario, const AdamConfig& cfg);

} // namespace rissat
