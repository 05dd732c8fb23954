// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rng.hpp"
#include "scenario.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace rissat {

/// Polar signal with the e^{-j phase} convention used throughout:
/// value = amplitude * exp(-j * phase). Amplitudes exclude sqrt(P_t); transmit
/// power multiplies once in received_power().
struct ComplexSignal {
  double amplitude = 0.0;
  double phase = 0.0;

  std::complex<double> value() const { return std::polar(amplitude, -phase); }
  static ComplexSignal from_value(std::complex<double> z);
};

/// Received power split as |S_SU + S_RU|^2 * P_t = direct + reflected + cross.
struct PowerBreakdown {
  double direct = 0.0;
  double reflected = 0.0;
  double cross = 0.0;
  double total = 0.0;
};

/// One realization of the random excess losses, dB.
struct ShadowRealization {
  double su_db = 0.0;
  std::vector<double> ru_db; // one per RIS
};

enum class ShadowLink { SatUser, RisUser };

/// Free-space loss in dB, frequency in Hz and distance in meters, plus an
/// excess term. Throws Error(Domain) unless f_c > 0 and d > 0.
double path_loss_db(double carrier_hz, double distance_m, double excess_db);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Phase accumulated over `distance` at `wavelength`, reduced to [0, 2pi).
double propagation_phase(double distance, double wavelength);

/// Shadowing realization with every random term at its mean.
ShadowRealization mean_shadowing(const Scenario& scenario);

ComplexSignal direct_signal(const Scenario& scenario, double shadow_su_db);

/// Amplitude of element n on panel k (0-based), gated by its activation state.
double element_amplitude(const Scenario& scenario, std::size_t k, std::size_t n,
                         double shadow_ru_db);

/// Coherent sum over all elements; `phases` holds the controllable phase of
/// every element in k-major order and `states` its activation. The overload
/// without states uses the panels' own states.
ComplexSignal reflected_signal(const Scenario& scenario, std::span<const double> phases,
                               std::span<const double> shadows_ru_db,
                               std::span<const std::uint8_t> states);
ComplexSignal reflected_signal(const Scenario& scenario, std::span<const double> phases,
                               std::span<const double> shadows_ru_db);

PowerBreakdown received_power(const ComplexSignal& direct, const ComplexSignal& reflected,
                              double tx_power_w);

/// One Gaussian draw in dB for the given link.
double sample_shadowing(const ShadowingModel& model, SplitMix64& rng, ShadowLink link);

/// Per-scenario constants the optimizers evaluate repeatedly. Amplitudes are
/// computed with zero random excess; a shadowing draw x (dB) scales them by
/// 10^(-x/20).
struct LinkTerms {
  double tx_power_w = 0.0;
  double direct_amp = 0.0;
  double direct_phase = 0.0;
  std::vector<double> element_amp; // flat, ungated by state
  std::vector<double> ris_phase;   // phi_SR + phi_RU per RIS, [0, 2pi)
  std::vector<std::size_t> offsets; // K + 1 entries

  std::size_t ris_count() const { return ris_phase.size(); }

  /// S_SU + S_RU for explicit phases/states and per-link amplitude scales.
  std::complex<double> total_signal(std::span<const double> phases,
                                    std::span<const std::uint8_t> states, double direct_scale,
                                    std::span<const double> ris_scale) const;
};

LinkTerms link_terms(const Scenario& scenario);

inline double amplitude_scale(double excess_db) { return std::pow(10.0, -excess_db / 20.0); }

} // namespace rissat
