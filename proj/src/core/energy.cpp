// SPDX-License-Identifier: Apache-2.0
#include "energy.hpp"

#include "error.hpp"

#include <algorithm>
#include <numeric>

namespace rissat {

ActivationMatrix::ActivationMatrix(std::vector<std::size_t> row_sizes, std::uint8_t fill)
    : row_sizes_(std::move(row_sizes)) {
  bits_.assign(std::accumulate(row_sizes_.begin(), row_sizes_.end(), std::size_t{0}), fill ? 1 : 0);
}

ActivationMatrix::ActivationMatrix(std::vector<std::size_t> row_sizes, std::vector<std::uint8_t> bits)
    : row_sizes_(std::move(row_sizes)), bits_(std::move(bits)) {
  if (bits_.size() != std::accumulate(row_sizes_.begin(), row_sizes_.end(), std::size_t{0}))
    throw Error(ErrorKind::Dimension, "activation bits do not match row sizes");
  for (auto b : bits_)
    if (b > 1) throw Error(ErrorKind::Domain, "activation entries must be 0 or 1");
}

ActivationMatrix ActivationMatrix::for_scenario(const Scenario& scenario, std::uint8_t fill) {
  std::vector<std::size_t> rows;
  for (const auto& p : scenario.panels) rows.push_back(p.size());
  return ActivationMatrix(std::move(rows), fill);
}

ActivationMatrix ActivationMatrix::from_scenario_states(const Scenario& scenario) {
  std::vector<std::size_t> rows;
  for (const auto& p : scenario.panels) rows.push_back(p.size());
  return ActivationMatrix(std::move(rows), scenario.state_vector());
}

std::uint8_t ActivationMatrix::at(std::size_t k, std::size_t n) const {
  if (k >= rows() || n >= row_sizes_[k]) throw Error(ErrorKind::Dimension, "activation index out of range");
  std::size_t off = 0;
  for (std::size_t i = 0; i < k; ++i) off += row_sizes_[i];
  return bits_[off + n];
}

std::size_t ActivationMatrix::active_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double total_consumption(double tx_power_w, std::size_t ris_count, const ConsumptionModel& model,
                         std::span<const std::uint8_t> states) {
  const auto check = [&](const std::vector<double>& v) {
    if (!v.empty() && v.size() != states.size())
      throw Error(ErrorKind::Dimension, "per-element consumption does not match activation size");
  };
  check(model.element_phase_override);
  check(model.element_control_override);

  double total = tx_power_w + static_cast<double>(ris_count) * model.circuit_w;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i]) total += model.element_cost(i);
  return total;
}

double total_consumption(double tx_power_w, std::size_t ris_count, const ConsumptionModel& model,
                         const ActivationMatrix& states) {
  return total_consumption(tx_power_w, ris_count, model, states.bits());
}

double total_consumption(const Scenario& scenario, const ActivationMatrix& states) {
  if (states.rows() != scenario.ris_count())
    throw Error(ErrorKind::Dimension, "activation matrix has wrong number of rows");
  for (std::size_t k = 0; k < states.rows(); ++k)
    if (states.row_sizes()[k] != scenario.panels[k].size())
      throw Error(ErrorKind::Dimension, "activation row length differs from panel element count");
  return total_consumption(scenario.rf.tx_power_w, scenario.ris_count(), scenario.consumption, states);
}

double energy_efficiency(double received_w, double consumed_w) {
  if (!(consumed_w > 0.0)) throw Error(ErrorKind::Domain, "consumed power must be positive");
  return received_w / consumed_w;
}

double link_eta(const Scenario& scenario, std::span<const double> phases,
                std::span<const std::uint8_t> states, const ShadowRealization& shadow) {
  const ComplexSignal direct = direct_signal(scenario, shadow.su_db);
  const ComplexSignal reflected = reflected_signal(scenario, phases, shadow.ru_db, states);
  const PowerBreakdown p = received_power(direct, reflected, scenario.rf.tx_power_w);
  return energy_efficiency(p.total, total_consumption(scenario.rf.tx_power_w, scenario.ris_count(),
                                                      scenario.consumption, states));
}

Scenario resize_panels(const Scenario& scenario, std::size_t n, double phase) {
  Scenario s = scenario;
  for (auto& p : s.panels) {
    const double g = p.gamma.empty() ? 1.0 : p.gamma.front();
    p.gamma.assign(n, g);
    p.phases.assign(n, phase);
    p.states.assign(n, 1);
  }
  s.consumption.element_phase_override.clear();
  s.consumption.element_control_override.clear();
  return s;
}

BaselineSweep baseline_eta_sweep(const Scenario& scenario, std::span<const double> phases,
                                 std::span<const std::size_t> n_values) {
  BaselineSweep out;
  out.n_values.assign(n_values.begin(), n_values.end());
  out.phases.assign(phases.begin(), phases.end());
  const ShadowRealization shadow = mean_shadowing(scenario);
  for (std::size_t n : n_values) {
    std::vector<double> row;
    row.reserve(phases.size());
    for (double phase : phases) {
      const Scenario s = resize_panels(scenario, n, phase);
      row.push_back(link_eta(s, s.phase_vector(), s.state_vector(), shadow));
    }
    out.eta.push_back(std::move(row));
  }
  return out;
}

} // namespace rissat
