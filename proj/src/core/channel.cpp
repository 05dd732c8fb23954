// SPDX-License-Identifier: Apache-2.0
#include "channel.hpp"

#include "error.hpp"
#include "geometry.hpp"

#include <cmath>
#include <random>
#include <string>

namespace rissat {

namespace {

void check_phase_dims(const Scenario& scenario, std::size_t phases, std::size_t shadows,
                      std::size_t states) {
  const std::size_t n = scenario.element_count();
  if (phases != n)
    throw Error(ErrorKind::Dimension, "phase vector has " + std::to_string(phases) +
                                          " entries, scenario has " + std::to_string(n) +
                                          " elements");
  if (shadows != scenario.ris_count())
    throw Error(ErrorKind::Dimension, "shadowing vector must have one entry per RIS");
  if (states != n) throw Error(ErrorKind::Dimension, "state vector length mismatch");
}

} // namespace

ComplexSignal ComplexSignal::from_value(std::complex<double> z) {
  return {std::abs(z), -std::arg(z)};
}

double path_loss_db(double carrier_hz, double distance_m, double excess_db) {
  if (!(carrier_hz > 0.0)) throw Error(ErrorKind::Domain, "carrier frequency must be positive");
  if (!(distance_m > 0.0)) throw Error(ErrorKind::Domain, "distance must be positive");
  return 20.0 * std::log10(carrier_hz) + 20.0 * std::log10(distance_m) - 147.55 + excess_db;
}

double propagation_phase(double distance, double wavelength) {
  const double cycles = distance / wavelength;
  return kTwoPi * (cycles - std::floor(cycles));
}

ShadowRealization mean_shadowing(const Scenario& scenario) {
  return {scenario.shadowing.mu_su_db,
          std::vector<double>(scenario.ris_count(), scenario.shadowing.mu_ru_db)};
}

ComplexSignal direct_signal(const Scenario& scenario, double shadow_su_db) {
  const auto d = scenario_distances(scenario);
  const auto& rf = scenario.rf;
  const double loss = db_to_linear(path_loss_db(rf.carrier_hz, d.sat_user, shadow_su_db));
  return {std::sqrt(rf.tx_gain * rf.rx_gain / loss), propagation_phase(d.sat_user, rf.wavelength())};
}

double element_amplitude(const Scenario& scenario, std::size_t k, std::size_t n,
                         double shadow_ru_db) {
  const RisPanel& panel = scenario.panels.at(k);
  if (n >= panel.size()) throw Error(ErrorKind::Dimension, "element index out of range");
  if (!panel.states[n]) return 0.0;
  const auto d = scenario_distances(scenario);
  const auto& rf = scenario.rf;
  const double l_sr =
      db_to_linear(path_loss_db(rf.carrier_hz, d.sat_ris[k], scenario.shadowing.eta_sr_db));
  const double l_ru = db_to_linear(path_loss_db(rf.carrier_hz, d.ris_user[k], shadow_ru_db));
  return std::sqrt(panel.gain_in * panel.gain_out * rf.tx_gain * panel.user_gain / (l_sr * l_ru)) *
         panel.gamma[n];
}

ComplexSignal reflected_signal(const Scenario& scenario, std::span<const double> phases,
                               std::span<const double> shadows_ru_db,
                               std::span<const std::uint8_t> states) {
  check_phase_dims(scenario, phases.size(), shadows_ru_db.size(), states.size());
  const LinkTerms terms = link_terms(scenario);
  std::vector<double> scale(terms.ris_count());
  for (std::size_t k = 0; k < scale.size(); ++k) scale[k] = amplitude_scale(shadows_ru_db[k]);
  const std::complex<double> s =
      terms.total_signal(phases, states, 0.0, scale); // direct path excluded
  return ComplexSignal::from_value(s);
}

ComplexSignal reflected_signal(const Scenario& scenario, std::span<const double> phases,
                               std::span<const double> shadows_ru_db) {
  const auto states = scenario.state_vector();
  return reflected_signal(scenario, phases, shadows_ru_db, states);
}

PowerBreakdown received_power(const ComplexSignal& direct, const ComplexSignal& reflected,
                              double tx_power_w) {
  PowerBreakdown p;
  p.direct = tx_power_w * direct.amplitude * direct.amplitude;
  p.reflected = tx_power_w * reflected.amplitude * reflected.amplitude;
  p.cross = 2.0 * tx_power_w * reflected.amplitude * direct.amplitude *
            std::cos(direct.phase - reflected.phase);
  p.total = p.direct + p.reflected + p.cross;
  return p;
}

double sample_shadowing(const ShadowingModel& model, SplitMix64& rng, ShadowLink link) {
  const double mu = link == ShadowLink::SatUser ? model.mu_su_db : model.mu_ru_db;
  const double sigma = link == ShadowLink::SatUser ? model.sigma_su_db : model.sigma_ru_db;
  if (sigma <= 0.0) return mu;
  std::normal_distribution<double> dist(mu, sigma);
  return dist(rng);
}

std::complex<double> LinkTerms::total_signal(std::span<const double> phases,
                                             std::span<const std::uint8_t> states,
                                             double direct_scale,
                                             std::span<const double> ris_scale) const {
  std::complex<double> s = std::polar(direct_amp * direct_scale, -direct_phase);
  for (std::size_t k = 0; k < ris_count(); ++k) {
    std::complex<double> panel_sum{0.0, 0.0};
    for (std::size_t i = offsets[k]; i < offsets[k + 1]; ++i) {
      if (!states[i]) continue;
      panel_sum += std::polar(element_amp[i], -(ris_phase[k] + phases[i]));
    }
    s += ris_scale[k] * panel_sum;
  }
  return s;
}

LinkTerms link_terms(const Scenario& scenario) {
  const auto d = scenario_distances(scenario);
  const auto& rf = scenario.rf;
  const double lambda = rf.wavelength();

  LinkTerms t;
  t.tx_power_w = rf.tx_power_w;
  const double l_su = db_to_linear(path_loss_db(rf.carrier_hz, d.sat_user, 0.0));
  t.direct_amp = std::sqrt(rf.tx_gain * rf.rx_gain / l_su);
  t.direct_phase = propagation_phase(d.sat_user, lambda);

  t.offsets.push_back(0);
  for (std::size_t k = 0; k < scenario.ris_count(); ++k) {
    const RisPanel& panel = scenario.panels[k];
    const double l_sr =
        db_to_linear(path_loss_db(rf.carrier_hz, d.sat_ris[k], scenario.shadowing.eta_sr_db));
    const double l_ru = db_to_linear(path_loss_db(rf.carrier_hz, d.ris_user[k], 0.0));
    const double base =
        std::sqrt(panel.gain_in * panel.gain_out * rf.tx_gain * panel.user_gain / (l_sr * l_ru));
    for (double g : panel.gamma) t.element_amp.push_back(base * g);
    const double phase = propagation_phase(d.sat_ris[k], lambda) + propagation_phase(d.ris_user[k], lambda);
    t.ris_phase.push_back(phase >= kTwoPi ? phase - kTwoPi : phase);
    t.offsets.push_back(t.element_amp.size());
  }
  return t;
}

} // namespace rissat
