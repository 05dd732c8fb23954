// SPDX-License-Identifier: Apache-2.0
#include "ideal_opt.hpp"

#include "channel.hpp"
#include "error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>

namespace rissat {

std::vector<double> optimal_phases(const Scenario& scenario) {
  const LinkTerms terms = link_terms(scenario);
  std::vector<double> theta(terms.element_amp.size());
  for (std::size_t k = 0; k < terms.ris_count(); ++k) {
    double phase = terms.direct_phase - terms.ris_phase[k];
    if (phase < 0.0) phase += kTwoPi;
    if (phase >= kTwoPi) phase -= kTwoPi;
    std::fill(theta.begin() + static_cast<std::ptrdiff_t>(terms.offsets[k]),
              theta.begin() + static_cast<std::ptrdiff_t>(terms.offsets[k + 1]), phase);
  }
  return theta;
}

DiversityChoice selective_diversity(std::span<const double> per_ris_powers) {
  if (per_ris_powers.empty()) throw Error(ErrorKind::Domain, "selective diversity needs at least one branch");
  DiversityChoice best{0, per_ris_powers[0]};
  for (std::size_t k = 1; k < per_ris_powers.size(); ++k)
    if (per_ris_powers[k] > best.power_w) best = {k, per_ris_powers[k]};
  return best;
}

std::vector<double> per_ris_cophased_power(const Scenario& scenario) {
  std::vector<double> out;
  out.reserve(scenario.ris_count());
  for (std::size_t k = 0; k < scenario.ris_count(); ++k) {
    const Scenario single = scenario.isolate(k);
    const ShadowRealization shadow = mean_shadowing(single);
    const std::vector<std::uint8_t> on(single.element_count(), 1);
    const auto theta = optimal_phases(single);
    const auto p = received_power(direct_signal(single, shadow.su_db),
                                  reflected_signal(single, theta, shadow.ru_db, on),
                                  single.rf.tx_power_w);
    out.push_back(p.total);
  }
  return out;
}

void BpsoConfig::validate() const {
  if (swarm_size < 2) throw Error(ErrorKind::Domain, "BPSO swarm_size must be at least 2");
  if (!(inertia >= 0.0 && inertia <= 1.0)) throw Error(ErrorKind::Domain, "BPSO inertia must lie in [0, 1]");
  if (!(cognitive >= 0.0) || !(social >= 0.0))
    throw Error(ErrorKind::Domain, "BPSO cognitive/social constants must be non-negative");
}

namespace {

constexpr std::size_t kParticleChunk = 1;

void evaluate_swarm(BpsoState& s, const BinaryFitness& fitness) {
  parallel_chunks(s.swarm, kParticleChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) s.fitness[i] = fitness(s.position(i));
  });
}

void refresh_bests(BpsoState& s) {
  for (std::size_t i = 0; i < s.swarm; ++i) {
    if (s.fitness[i] < s.personal_best_fitness[i]) {
      s.personal_best_fitness[i] = s.fitness[i];
      std::copy_n(s.positions.begin() + static_cast<std::ptrdiff_t>(i * s.dims), s.dims,
                  s.personal_best.begin() + static_cast<std::ptrdiff_t>(i * s.dims));
    }
  }
  for (std::size_t i = 0; i < s.swarm; ++i) {
    if (s.personal_best_fitness[i] < s.global_best_fitness) {
      s.global_best_fitness = s.personal_best_fitness[i];
      auto src = s.best_of(i);
      s.global_best.assign(src.begin(), src.end());
    }
  }
}

double clamp_velocity(double v, double limit) {
  return limit > 0.0 ? std::clamp(v, -limit, limit) : v;
}

} // namespace

BpsoState bpso_init(std::size_t dims, const BinaryFitness& fitness, const BpsoConfig& cfg,
                    const RngStream& rng) {
  cfg.validate();
  if (dims == 0) throw Error(ErrorKind::Domain, "BPSO needs at least one decision variable");
  BpsoState s;
  s.dims = dims;
  s.swarm = cfg.swarm_size;
  s.positions.resize(s.swarm * dims);
  s.velocities.resize(s.swarm * dims);
  const double vmax = cfg.velocity_limit > 0.0 ? cfg.velocity_limit : 1.0;
  for (std::size_t i = 0; i < s.swarm; ++i) {
    SplitMix64 gen = rng.child("init").at(i);
    for (std::size_t d = 0; d < dims; ++d) {
      s.positions[i * dims + d] = gen.uniform() < 0.5 ? 1 : 0;
      s.velocities[i * dims + d] = (2.0 * gen.uniform() - 1.0) * vmax;
    }
  }
  s.fitness.assign(s.swarm, 0.0);
  evaluate_swarm(s, fitness);
  s.personal_best = s.positions;
  s.personal_best_fitness = s.fitness;
  s.global_best_fitness = std::numeric_limits<double>::infinity();
  refresh_bests(s);
  return s;
}

BpsoState bpso_step(BpsoState s, const BinaryFitness& fitness, const BpsoConfig& cfg,
                    const RngStream& rng) {
  const RngStream step_rng = rng.child("step").child(s.iteration);
  for (std::size_t i = 0; i < s.swarm; ++i) {
    SplitMix64 gen = step_rng.at(i);
    for (std::size_t d = 0; d < s.dims; ++d) {
      const std::size_t idx = i * s.dims + d;
      const double pos = s.positions[idx];
      const double r1 = gen.uniform();
      const double r2 = gen.uniform();
      double v = cfg.inertia * s.velocities[idx] +
                 cfg.cognitive * r1 * (s.personal_best[idx] - pos) +
                 cfg.social * r2 * (s.global_best[d] - pos);
      v = clamp_velocity(v, cfg.velocity_limit);
      s.velocities[idx] = v;
      s.positions[idx] = sigmoid(v) > 0.5 ? 1 : 0;
    }
  }
  evaluate_swarm(s, fitness);
  refresh_bests(s);
  ++s.iteration;
  return s;
}

BinaryFitness make_activation_fitness(const Scenario& scenario, const ActivationObjective& objective) {
  const double tx = scenario.rf.tx_power_w;
  const std::size_t k = scenario.ris_count();
  const ConsumptionModel model = scenario.consumption;
  if (objective.mode == ActivationMode::Pure) {
    return [=](std::span<const std::uint8_t> s) { return total_consumption(tx, k, model, s); };
  }

  if (objective.phases.size() != scenario.element_count())
    throw Error(ErrorKind::Dimension, "constrained objective needs one phase per element");
  if (!(objective.min_received_power_w > 0.0))
    throw Error(ErrorKind::Domain, "constrained objective needs a positive power floor");

  auto terms = std::make_shared<const LinkTerms>(link_terms(scenario));
  const ShadowRealization shadow = mean_shadowing(scenario);
  std::vector<double> ris_scale;
  for (double x : shadow.ru_db) ris_scale.push_back(amplitude_scale(x));
  const double direct_scale = amplitude_scale(shadow.su_db);
  const std::vector<std::uint8_t> all_on(scenario.element_count(), 1);
  const double ceiling = total_consumption(tx, k, model, all_on);
  const double floor = objective.min_received_power_w;
  const std::vector<double> phases = objective.phases;

  return [=](std::span<const std::uint8_t> s) {
    const double cost = total_consumption(tx, k, model, s);
    const double received = tx * std::norm(terms->total_signal(phases, s, direct_scale, ris_scale));
    if (received >= floor) return cost;
    return ceiling + cost + ceiling * (floor - received) / floor;
  };
}

BpsoResult bpso_minimize(std::vector<std::size_t> row_sizes, const BinaryFitness& fitness,
                         const BpsoConfig& cfg) {
  const std::size_t dims = std::accumulate(row_sizes.begin(), row_sizes.end(), std::size_t{0});
  const RngStream rng{cfg.seed, fnv1a64("bpso")};
  BpsoState state = bpso_init(dims, fitness, cfg, rng);
  BpsoResult out;
  out.trace.reserve(cfg.max_iters);
  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    state = bpso_step(std::move(state), fitness, cfg, rng);
    out.trace.push_back(state.global_best_fitness);
  }
  out.best = ActivationMatrix(std::move(row_sizes), state.global_best);
  out.best_fitness = state.global_best_fitness;
  return out;
}

BpsoResult bpso_minimize(const Scenario& scenario, const BpsoConfig& cfg,
                         const ActivationObjective& objective) {
  std::vector<std::size_t> rows;
  for (const auto& p : scenario.panels) rows.push_back(p.size());
  return bpso_minimize(std::move(rows), make_activation_fitness(scenario, objective), cfg);
}

IeResult ie_optimize(const Scenario& scenario, const IeOptions& options) {
  IeResult r;
  const ShadowRealization shadow = mean_shadowing(scenario);
  const double tx = scenario.rf.tx_power_w;
  const std::size_t n = scenario.element_count();
  const std::vector<std::uint8_t> all_on(n, 1);
  const ComplexSignal direct = direct_signal(scenario, shadow.su_db);

  r.theta = optimal_phases(scenario);
  r.per_ris_power = per_ris_cophased_power(scenario);
  r.k_star = selective_diversity(r.per_ris_power).index;

  const double p_full = received_power(direct, reflected_signal(scenario, r.theta, shadow.ru_db, all_on), tx).total;
  const double f_full = total_consumption(tx, scenario.ris_count(), scenario.consumption, all_on);
  r.eta_cophased_all_active = energy_efficiency(p_full, f_full);

  const std::vector<double> zero_phase(n, 0.0);
  r.eta_baseline = link_eta(scenario, zero_phase, all_on, shadow);

  ActivationObjective objective;
  objective.mode = options.mode;
  if (options.mode == ActivationMode::Constrained) {
    const double p_direct = tx * direct.amplitude * direct.amplitude;
    objective.min_received_power_w = options.min_received_power_w > 0.0
                                         ? options.min_received_power_w
                                         : p_direct + options.min_power_fraction * (p_full - p_direct);
    objective.phases = r.theta;
  }
  BpsoResult bpso = bpso_minimize(scenario, options.bpso, objective);
  r.activation = std::move(bpso.best);
  r.bpso_trace = std::move(bpso.trace);

  const auto states = r.activation.bits();
  r.received_power_w = received_power(direct, reflected_signal(scenario, r.theta, shadow.ru_db, states), tx).total;
  r.consumption_w = total_consumption(scenario, r.activation);
  r.eta_star = energy_efficiency(r.received_power_w, r.consumption_w);
  return r;
}

std::vector<ActiveElementPoint> eta_vs_active_elements(const Scenario& scenario) {
  const std::size_t n = scenario.element_count();
  const ShadowRealization shadow = mean_shadowing(scenario);
  const LinkTerms terms = link_terms(scenario);
  const auto theta = optimal_phases(scenario);
  const std::vector<double> zero_phase(n, 0.0);

  // Strongest first; stable so equal amplitudes keep k-major order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> amp = terms.element_amp;
  for (std::size_t k = 0; k < terms.ris_count(); ++k)
    for (std::size_t i = terms.offsets[k]; i < terms.offsets[k + 1]; ++i)
      amp[i] *= amplitude_scale(shadow.ru_db[k]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return amp[a] > amp[b]; });

  std::vector<ActiveElementPoint> out;
  std::vector<std::uint8_t> base(n, 0), opt(n, 0);
  for (std::size_t m = 0; m <= n; ++m) {
    if (m > 0) {
      base[m - 1] = 1;
      opt[order[m - 1]] = 1;
    }
    out.push_back({m, link_eta(scenario, zero_phase, base, shadow), link_eta(scenario, theta, opt, shadow)});
  }
  return out;
}

} // namespace rissat
