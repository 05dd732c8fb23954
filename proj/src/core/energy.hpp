// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "channel.hpp"
#include "scenario.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rissat {

/// K x N binary activation states, stored row-major. Rows may differ in
/// length when panels have different element counts.
class ActivationMatrix {
 public:
  ActivationMatrix() = default;
  ActivationMatrix(std::vector<std::size_t> row_sizes, std::uint8_t fill);
  ActivationMatrix(std::vector<std::size_t> row_sizes, std::vector<std::uint8_t> bits);

  static ActivationMatrix for_scenario(const Scenario& scenario, std::uint8_t fill);
  static ActivationMatrix from_scenario_states(const Scenario& scenario);

  std::size_t rows() const { return row_sizes_.size(); }
  std::size_t size() const { return bits_.size(); }
  const std::vector<std::size_t>& row_sizes() const { return row_sizes_; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::uint8_t at(std::size_t k, std::size_t n) const;
  std::size_t active_count() const;

  bool operator==(const ActivationMatrix&) const = default;

 private:
  std::vector<std::size_t> row_sizes_;
  std::vector<std::uint8_t> bits_;
};

/// P_t + K * P_crt + sum of (P_el + P_con) over active elements.
double total_consumption(double tx_power_w, std::size_t ris_count, const ConsumptionModel& model,
                         std::span<const std::uint8_t> states);
double total_consumption(double tx_power_w, std::size_t ris_count, const ConsumptionModel& model,
                         const ActivationMatrix& states);
/// Same, with the matrix shape checked against the scenario's panels.
double total_consumption(const Scenario& scenario, const ActivationMatrix& states);

/// Received over consumed power. Throws Error(Domain) unless consumed > 0.
double energy_efficiency(double received_w, double consumed_w);

/// Deterministic efficiency of one configuration under one shadowing draw.
double link_eta(const Scenario& scenario, std::span<const double> phases,
                std::span<const std::uint8_t> states, const ShadowRealization& shadow);

struct BaselineSweep {
  std::vector<std::size_t> n_values;
  std::vector<double> phases;
  std::vector<std::vector<double>> eta; // [n index][phase index]
};

/// Baseline efficiency with every element active and one uniform phase per
/// sweep point, for each per-panel element count in `n_values`. Shadowing
/// sits at its mean.
BaselineSweep baseline_eta_sweep(const Scenario& scenario, std::span<const double> phases,
                                 std::span<const std::size_t> n_values);

/// Scenario copy with every panel resized to n elements (gamma taken from the
/// first element), all active, at the given uniform phase.
Scenario resize_panels(const Scenario& scenario, std::size_t n, double phase);

} // namespace rissat
