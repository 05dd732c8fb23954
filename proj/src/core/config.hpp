// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ideal_opt.hpp"
#include "nie_opt.hpp"
#include "scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rissat {

// Config values are kept in the units the file uses (degrees, km, GHz, dBi,
// mW). build_scenario() converts them to radians, meters, Hz, linear gains and
// watts.

struct GeoSpec {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_km = 0.0;
};

struct RisSpec {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  std::size_t elements = 32;
  double gamma = 1.0;
  double gain_in_dbi = 0.0;
  double gain_out_dbi = 0.0;
  std::optional<double> user_gain_dbi; // defaults to the receiver gain
};

struct ScenarioSpec {
  double earth_radius_km = 6371.0;
  GeoSpec satellite{-37.70, 145.10, 550.0};
  GeoSpec user{-37.8136, 144.9631, 0.0};
  double frequency_ghz = 2.0;
  double tx_power_w = 1.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double circuit_mw = 10.0;
  double element_phase_mw = 0.33;
  double element_control_mw = 0.05;
  double mu_ru_db = 0.0;
  double sigma_ru_db = 4.0;
  double mu_su_db = 0.0;
  double sigma_su_db = 0.0;
  double eta_sr_db = 0.0;
  std::vector<RisSpec> ris = default_ris();

  static std::vector<RisSpec> default_ris();
};

struct BpsoSpec {
  BpsoConfig config;
  ActivationMode mode = ActivationMode::Pure;
  double min_power_fraction = 0.5;
};

struct AdamSpec {
  AdamConfig config;
  RisSelection selection = RisSelection::Isolated;
};

struct FigureSpec {
  std::vector<std::size_t> n_values{16, 32, 64, 128};
  std::size_t phase_points = 37;
  std::vector<double> tx_power_sweep_w{0.5, 1.0, 2.0, 4.0};
  double distance_min_m = 10.0;
  double distance_max_m = 2000.0;
  std::size_t distance_points = 60;
  std::size_t multistart_runs = 10;
};

struct ExperimentConfig {
  ScenarioSpec scenario;
  BpsoSpec bpso;
  AdamSpec adam;
  FigureSpec figures;
  std::optional<std::uint64_t> seed;
  std::string experiment = "figures-all";
  std::string output_dir = "out";

  /// Dotted names of fields filled from defaults while loading.
  std::vector<std::string> defaulted;

  Scenario build_scenario() const;
};

/// Parses TOML text. Throws Error(Parse) with line/column information for
/// malformed text and ValidationError naming the field for bad values or
/// unknown keys.
ExperimentConfig parse_config(std::string_view text, std::string_view source_name = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical TOML for a resolved config; parse_config(serialize_config(c))
/// reproduces c.
std::string serialize_config(const ExperimentConfig& cfg);

/// 16 hex digits identifying the resolved config (seed included).
std::string config_hash(const ExperimentConfig& cfg);

double dbi_to_linear(double dbi);
double dbm_to_watts(double dbm);
double degrees_to_radians(double deg);

} // namespace rissat
