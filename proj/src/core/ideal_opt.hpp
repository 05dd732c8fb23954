// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "energy.hpp"
#include "rng.hpp"
#include "scenario.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rissat {

// ---------------------------------------------------------------------------
// Phase co-phasing and selective diversity
// ---------------------------------------------------------------------------

/// Controllable phases that bring every element's total phase onto the
/// direct-path phase: phi*_kn = (phi_SU - phi_SRk - phi_RUk) mod 2pi.
/// Shadowing only scales amplitudes, so the result is independent of it.
std::vector<double> optimal_phases(const Scenario& scenario);

struct DiversityChoice {
  std::size_t index = 0; // 0-based
  double power_w = 0.0;
};

/// Largest branch power; ties go to the lowest index. Throws on empty input.
DiversityChoice selective_diversity(std::span<const double> per_ris_powers);

/// Received power of each panel on its own (as if K = 1), co-phased, all its
/// elements active, shadowing at the mean.
std::vector<double> per_ris_cophased_power(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Binary PSO
// ---------------------------------------------------------------------------

struct BpsoConfig {
  std::size_t swarm_size = 30;
  std::size_t max_iters = 200;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  double velocity_limit = 4.0; // |v| clamp; <= 0 disables
  std::uint64_t seed = 0;

  void validate() const;
};

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

/// Fitness over a flat activation vector; lower is better. Must be safe to
/// call concurrently.
using BinaryFitness = std::function<double(std::span<const std::uint8_t>)>;

struct BpsoState {
  std::size_t dims = 0;
  std::size_t swarm = 0;
  std::size_t iteration = 0;
  std::vector<std::uint8_t> positions; // swarm x dims
  std::vector<double> velocities;      // swarm x dims
  std::vector<double> fitness;         // current fitness per particle
  std::vector<std::uint8_t> personal_best;
  std::vector<double> personal_best_fitness;
  std::vector<std::uint8_t> global_best;
  double global_best_fitness = 0.0;

  std::span<const std::uint8_t> position(std::size_t i) const {
    return std::span<const std::uint8_t>(positions).subspan(i * dims, dims);
  }
  std::span<const std::uint8_t> best_of(std::size_t i) const {
    return std::span<const std::uint8_t>(personal_best).subspan(i * dims, dims);
  }
};

/// Random initial swarm: positions are fair coin flips, velocities uniform in
/// [-velocity_limit, velocity_limit] (or [-1, 1] with no limit).
BpsoState bpso_init(std::size_t dims, const BinaryFitness& fitness, const BpsoConfig& cfg,
                    const RngStream& rng);

/// One synchronous swarm iteration:
///   v' = w v + c1 r1 (p_best - s) + c2 r2 (g_best - s), r1, r2 ~ U[0,1) per entry
///   s' = 1 iff sigmoid(v') > 0.5
/// Personal bests are replaced on strict improvement, then the global best is
/// refreshed once all particles have moved.
BpsoState bpso_step(BpsoState state, const BinaryFitness& fitness, const BpsoConfig& cfg,
                    const RngStream& rng);

enum class ActivationMode {
  Pure,        // minimize consumption alone
  Constrained, // minimize consumption subject to a received-power floor
};

struct ActivationObjective {
  ActivationMode mode = ActivationMode::Pure;
  double min_received_power_w = 0.0;
  std::vector<double> phases; // phases used to evaluate received power
};

/// Consumption fitness for `scenario`. In constrained mode a configuration
/// that misses the power floor scores above the all-active consumption, plus
/// its relative shortfall, so every feasible point beats every infeasible one.
BinaryFitness make_activation_fitness(const Scenario& scenario, const ActivationObjective& objective);

struct BpsoResult {
  ActivationMatrix best;
  double best_fitness = 0.0;
  std::vector<double> trace; // incumbent fitness after each iteration
};

BpsoResult bpso_minimize(const Scenario& scenario, const BpsoConfig& cfg,
                         const ActivationObjective& objective);

/// Generic driver behind bpso_minimize.
BpsoResult bpso_minimize(std::vector<std::size_t> row_sizes, const BinaryFitness& fitness,
                         const BpsoConfig& cfg);

// ---------------------------------------------------------------------------
// Ideal-environment pipeline
// ---------------------------------------------------------------------------

struct IeOptions {
  BpsoConfig bpso;
  ActivationMode mode = ActivationMode::Pure;
  /// Constrained mode floor as a fraction of the gap between direct-only and
  /// fully co-phased received power. Ignored if min_received_power_w is set.
  double min_power_fraction = 0.5;
  double min_received_power_w = 0.0; // > 0 overrides the fraction
};

struct IeResult {
  std::vector<double> theta;          // co-phased controllable phases
  std::vector<double> per_ris_power;  // each panel alone, co-phased
  std::size_t k_star = 0;             // selective-diversity choice, 0-based
  ActivationMatrix activation;        // BPSO incumbent
  std::vector<double> bpso_trace;
  double received_power_w = 0.0;      // at theta with the incumbent activation
  double consumption_w = 0.0;
  double eta_star = 0.0;
  double eta_cophased_all_active = 0.0; // before consumption minimization
  double eta_baseline = 0.0;            // all active, every phase 0
};

IeResult ie_optimize(const Scenario& scenario, const IeOptions& options);

struct ActiveElementPoint {
  std::size_t active = 0;
  double eta_baseline = 0.0;  // first `active` elements in index order, phase 0
  double eta_optimized = 0.0; // strongest `active` elements, co-phased
};

/// Efficiency against the number of active elements for the baseline and the
/// co-phased configuration that keeps the strongest elements (the selected
/// RIS first when element amplitudes are uniform per panel).
std::vector<ActiveElementPoint> eta_vs_active_elements(const Scenario& scenario);

} // namespace rissat
