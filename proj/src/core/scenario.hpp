// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rissat {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Link-level RF constants. Gains are linear.
struct RfConstants {
  double carrier_hz = 2.0e9;
  double tx_power_w = 1.0;
  double tx_gain = 1.0;
  double rx_gain = 1.0;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
};

/// One reflecting surface. Elements of a panel share its position, so they
/// share propagation distances; they differ by reflection coefficient,
/// controllable phase and activation state.
struct RisPanel {
  GeoPosition position;
  std::vector<double> gamma;        // reflection coefficient per element, (0, 1]
  double gain_in = 1.0;             // element gain toward the satellite
  double gain_out = 1.0;            // element gain toward the user
  double user_gain = 1.0;           // receive antenna gain on this RIS link
  std::vector<double> phases;       // controllable phase per element, [0, 2pi]
  std::vector<std::uint8_t> states; // 1 active, 0 off

  std::size_t size() const { return gamma.size(); }

  static RisPanel uniform(GeoPosition position, std::size_t n, double gamma = 1.0) {
    RisPanel p;
    p.position = position;
    p.gamma.assign(n, gamma);
    p.phases.assign(n, 0.0);
    p.states.assign(n, 1);
    return p;
  }
};

/// Log-normal shadowing, parameters in dB.
struct ShadowingModel {
  double mu_ru_db = 0.0;
  double sigma_ru_db = 0.0;
  double mu_su_db = 0.0;
  double sigma_su_db = 0.0;
  double eta_sr_db = 0.0; // deterministic excess on satellite-RIS links
};

/// Power drawn by RIS hardware, watts. Per-element vectors, when non-empty,
/// override the scalar values and must have one entry per element.
struct ConsumptionModel {
  double circuit_w = 10e-3;
  double element_phase_w = 0.33e-3;
  double element_control_w = 0.0;
  std::vector<double> element_phase_override;
  std::vector<double> element_control_override;

  double element_cost(std::size_t flat_index) const {
    const double el = element_phase_override.empty() ? element_phase_w
                                                     : element_phase_override.at(flat_index);
    const double con = element_control_override.empty()
                           ? element_control_w
                           : element_control_override.at(flat_index);
    return el + con;
  }
};

/// Immutable description of one satellite-RIS-user link.
struct Scenario {
  double earth_radius = kDefaultEarthRadius;
  GeoPosition satellite{0.0, 0.0, 550e3};
  GeoPosition user;
  RfConstants rf;
  std::vector<RisPanel> panels;
  ConsumptionModel consumption;
  ShadowingModel shadowing;

  std::size_t ris_count() const { return panels.size(); }

  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& p : panels) n += p.size();
    return n;
  }

  /// Flat offset of panel k's first element (k-major ordering).
  std::size_t offset(std::size_t k) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < k; ++i) n += panels[i].size();
    return n;
  }

  std::vector<double> phase_vector() const {
    std::vector<double> out;
    out.reserve(element_count());
    for (const auto& p : panels) out.insert(out.end(), p.phases.begin(), p.phases.end());
    return out;
  }

  std::vector<std::uint8_t> state_vector() const {
    std::vector<std::uint8_t> out;
    out.reserve(element_count());
    for (const auto& p : panels) out.insert(out.end(), p.states.begin(), p.states.end());
    return out;
  }

  /// Copy holding only panel k, as if the system had a single RIS.
  Scenario isolate(std::size_t k) const {
    Scenario s = *this;
    s.panels = {panels.at(k)};
    if (!consumption.element_phase_override.empty() ||
        !consumption.element_control_override.empty()) {
      const std::size_t begin = offset(k);
      const std::size_t n = panels[k].size();
      auto slice = [&](const std::vector<double>& v) {
        return v.empty() ? v
                         : std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                               v.begin() + static_cast<std::ptrdiff_t>(begin + n));
      };
      s.consumption.element_phase_override = slice(consumption.element_phase_override);
      s.consumption.element_control_override = slice(consumption.element_control_override);
    }
    return s;
  }
};

} // namespace rissat
