// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include "error.hpp"
#include "rng.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rissat {

double dbi_to_linear(double dbi) { return std::pow(10.0, dbi / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double degrees_to_radians(double deg) { return deg * kPi / 180.0; }

std::vector<RisSpec> ScenarioSpec::default_ris() {
  // Four panels 40 m to 400 m from the default user, one per compass side.
  std::vector<RisSpec> out(4);
  out[0].lat_deg = -37.81324, out[0].lon_deg = 144.9631;
  out[1].lat_deg = -37.8136, out[1].lon_deg = 144.96412;
  out[2].lat_deg = -37.81522, out[2].lon_deg = 144.9631;
  out[3].lat_deg = -37.8136, out[3].lon_deg = 144.95855;
  return out;
}

namespace {

/// Reads keys out of one TOML table, records which were defaulted and rejects
/// keys nobody asked for.
class Reader {
 public:
  Reader(const toml::table* table, std::string path, std::vector<std::string>& defaulted)
      : table_(table), path_(std::move(path)), defaulted_(defaulted) {}

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const toml::node* find(std::string_view key) {
    seen_.insert(std::string(key));
    const toml::node* n = table_ ? table_->get(key) : nullptr;
    if (!n) defaulted_.push_back(field(key));
    return n;
  }

  double number(std::string_view key, double fallback) {
    const toml::node* n = find(key);
    if (!n) return fallback;
    if (auto v = n->value_exact<double>()) return check_finite(key, *v);
    if (auto v = n->value_exact<std::int64_t>()) return static_cast<double>(*v);
    throw ValidationError(field(key), "expected a number");
  }

  std::optional<double> optional_number(std::string_view key) {
    seen_.insert(std::string(key));
    if (!table_ || !table_->get(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::size_t count(std::string_view key, std::size_t fallback, std::size_t min_value) {
    const toml::node* n = find(key);
    if (!n) return fallback;
    auto v = n->value_exact<std::int64_t>();
    if (!v) throw ValidationError(field(key), "expected an integer");
    if (*v < static_cast<std::int64_t>(min_value))
      throw ValidationError(field(key), "must be at least " + std::to_string(min_value));
    return static_cast<std::size_t>(*v);
  }

  std::string text(std::string_view key, std::string fallback) {
    const toml::node* n = find(key);
    if (!n) return fallback;
    auto v = n->value_exact<std::string>();
    if (!v) throw ValidationError(field(key), "expected a string");
    return *v;
  }

  const toml::table* subtable(std::string_view key) {
    seen_.insert(std::string(key));
    if (!table_) return nullptr;
    const toml::node* n = table_->get(key);
    if (!n) return nullptr;
    if (!n->is_table()) throw ValidationError(field(key), "expected a table");
    return n->as_table();
  }

  const toml::array* array(std::string_view key) {
    const toml::node* n = find(key);
    if (!n) return nullptr;
    if (!n->is_array()) throw ValidationError(field(key), "expected an array");
    return n->as_array();
  }

  void finish() const {
    if (!table_) return;
    for (auto&& [k, v] : *table_) {
      if (!seen_.count(std::string(k.str()))) throw ValidationError(field(k.str()), "unknown key");
    }
  }

 private:
  double check_finite(std::string_view key, double v) const {
    if (!std::isfinite(v)) throw ValidationError(field(key), "must be finite");
    return v;
  }

  const toml::table* table_;
  std::string path_;
  std::vector<std::string>& defaulted_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& reason) {
  if (!ok) throw ValidationError(field, reason);
}

GeoSpec read_geo(Reader& parent, std::string_view key, GeoSpec fallback, std::vector<std::string>& defaulted,
                 bool ground) {
  Reader r(parent.subtable(key), parent.field(key), defaulted);
  GeoSpec g;
  g.lat_deg = r.number("lat_deg", fallback.lat_deg);
  g.lon_deg = r.number("lon_deg", fallback.lon_deg);
  g.alt_km = ground ? 0.0 : r.number("alt_km", fallback.alt_km);
  r.finish();
  require(g.lat_deg >= -90.0 && g.lat_deg <= 90.0, r.field("lat_deg"), "latitude must lie in [-90, 90] degrees");
  require(g.lon_deg >= -180.0 && g.lon_deg < 180.0, r.field("lon_deg"), "longitude must lie in [-180, 180) degrees");
  require(g.alt_km >= 0.0, r.field("alt_km"), "altitude must be non-negative");
  return g;
}

ScenarioSpec read_scenario(Reader& root, std::vector<std::string>& defaulted) {
  ScenarioSpec s;
  const ScenarioSpec d;
  Reader r(root.subtable("scenario"), "scenario", defaulted);
  s.earth_radius_km = r.number("earth_radius_km", d.earth_radius_km);
  require(s.earth_radius_km > 0.0, r.field("earth_radius_km"), "must be positive");
  s.satellite = read_geo(r, "satellite", d.satellite, defaulted, false);
  require(s.satellite.alt_km > 0.0, "scenario.satellite.alt_km", "satellite altitude must be positive");
  s.user = read_geo(r, "user", d.user, defaulted, true);

  {
    Reader rf(r.subtable("rf"), "scenario.rf", defaulted);
    s.frequency_ghz = rf.number("frequency_ghz", d.frequency_ghz);
    require(s.frequency_ghz > 0.0, rf.field("frequency_ghz"), "must be positive");
    auto watts = rf.optional_number("tx_power_w");
    auto dbm = rf.optional_number("tx_power_dbm");
    require(!(watts && dbm), rf.field("tx_power_w"), "give tx_power_w or tx_power_dbm, not both");
    if (!watts && !dbm) defaulted.push_back(rf.field("tx_power_w"));
    s.tx_power_w = watts ? *watts : dbm ? dbm_to_watts(*dbm) : d.tx_power_w;
    require(s.tx_power_w > 0.0, rf.field(dbm ? "tx_power_dbm" : "tx_power_w"), "must be positive");
    s.tx_gain_dbi = rf.number("tx_gain_dbi", d.tx_gain_dbi);
    s.rx_gain_dbi = rf.number("rx_gain_dbi", d.rx_gain_dbi);
    rf.finish();
  }
  {
    Reader c(r.subtable("consumption"), "scenario.consumption", defaulted);
    s.circuit_mw = c.number("circuit_mw", d.circuit_mw);
    s.element_phase_mw = c.number("element_phase_mw", d.element_phase_mw);
    s.element_control_mw = c.number("element_control_mw", d.element_control_mw);
    c.finish();
    require(s.circuit_mw >= 0.0, c.field("circuit_mw"), "must be non-negative");
    require(s.element_phase_mw >= 0.0, c.field("element_phase_mw"), "must be non-negative");
    require(s.element_control_mw >= 0.0, c.field("element_control_mw"), "must be non-negative");
  }
  {
    Reader sh(r.subtable("shadowing"), "scenario.shadowing", defaulted);
    s.mu_ru_db = sh.number("mu_ru_db", d.mu_ru_db);
    s.sigma_ru_db = sh.number("sigma_ru_db", d.sigma_ru_db);
    s.mu_su_db = sh.number("mu_su_db", d.mu_su_db);
    s.sigma_su_db = sh.number("sigma_su_db", d.sigma_su_db);
    s.eta_sr_db = sh.number("eta_sr_db", d.eta_sr_db);
    sh.finish();
    require(s.sigma_ru_db >= 0.0, sh.field("sigma_ru_db"), "must be non-negative");
    require(s.sigma_su_db >= 0.0, sh.field("sigma_su_db"), "must be non-negative");
  }

  if (const toml::array* list = r.array("ris")) {
    require(!list->empty(), "scenario.ris", "at least one RIS is required");
    s.ris.clear();
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string path = "scenario.ris[" + std::to_string(i) + "]";
      const toml::node& node = *list->get(i);
      require(node.is_table(), path, "expected a table");
      Reader p(node.as_table(), path, defaulted);
      RisSpec entry;
      entry.lat_deg = p.number("lat_deg", entry.lat_deg);
      entry.lon_deg = p.number("lon_deg", entry.lon_deg);
      entry.elements = p.count("elements", entry.elements, 1);
      entry.gamma = p.number("gamma", entry.gamma);
      entry.gain_in_dbi = p.number("gain_in_dbi", entry.gain_in_dbi);
      entry.gain_out_dbi = p.number("gain_out_dbi", entry.gain_out_dbi);
      entry.user_gain_dbi = p.optional_number("user_gain_dbi");
      p.finish();
      require(entry.lat_deg >= -90.0 && entry.lat_deg <= 90.0, p.field("lat_deg"), "latitude must lie in [-90, 90] degrees");
      require(entry.lon_deg >= -180.0 && entry.lon_deg < 180.0, p.field("lon_deg"), "longitude must lie in [-180, 180) degrees");
      require(entry.gamma > 0.0 && entry.gamma <= 1.0, p.field("gamma"), "reflection coefficient must lie in (0, 1]");
      s.ris.push_back(entry);
    }
  }
  r.finish();
  return s;
}

BpsoSpec read_bpso(Reader& root, std::vector<std::string>& defaulted) {
  BpsoSpec b;
  Reader r(root.subtable("bpso"), "bpso", defaulted);
  b.config.swarm_size = r.count("swarm_size", b.config.swarm_size, 2);
  b.config.max_iters = r.count("max_iters", b.config.max_iters, 1);
  b.config.inertia = r.number("inertia", b.config.inertia);
  b.config.cognitive = r.number("cognitive", b.config.cognitive);
  b.config.social = r.number("social", b.config.social);
  b.config.velocity_limit = r.number("velocity_limit", b.config.velocity_limit);
  const std::string mode = r.text("mode", "pure");
  b.min_power_fraction = r.number("min_power_fraction", b.min_power_fraction);
  r.finish();
  require(b.config.inertia >= 0.0 && b.config.inertia <= 1.0, "bpso.inertia", "must lie in [0, 1]");
  require(b.config.cognitive > 0.0, "bpso.cognitive", "must be positive");
  require(b.config.social > 0.0, "bpso.social", "must be positive");
  require(mode == "pure" || mode == "constrained", "bpso.mode", "must be \"pure\" or \"constrained\"");
  b.mode = mode == "pure" ? ActivationMode::Pure : ActivationMode::Constrained;
  require(b.min_power_fraction >= 0.0 && b.min_power_fraction <= 1.0, "bpso.min_power_fraction", "must lie in [0, 1]");
  return b;
}

AdamSpec read_adam(Reader& root, std::vector<std::string>& defaulted) {
  AdamSpec a;
  AdamConfig& c = a.config;
  Reader r(root.subtable("adam"), "adam", defaulted);
  c.learning_rate = r.number("learning_rate", c.learning_rate);
  c.beta1 = r.number("beta1", c.beta1);
  c.beta2 = r.number("beta2", c.beta2);
  c.epsilon = r.number("epsilon", c.epsilon);
  c.mc_samples = r.count("mc_samples", c.mc_samples, 1);
  c.eval_samples = r.count("eval_samples", c.eval_samples, 1);
  c.max_iters = r.count("max_iters", c.max_iters, 1);
  c.convergence_tol = r.number("convergence_tol", c.convergence_tol);
  c.patience = r.count("patience", c.patience, 1);
  const std::string boundary = r.text("boundary", "clip");
  const std::string selection = r.text("selection", "isolated");
  r.finish();
  require(c.learning_rate > 0.0, "adam.learning_rate", "must be positive");
  require(c.beta1 >= 0.0 && c.beta1 < 1.0, "adam.beta1", "must lie in [0, 1)");
  require(c.beta2 >= 0.0 && c.beta2 < 1.0, "adam.beta2", "must lie in [0, 1)");
  require(c.epsilon > 0.0, "adam.epsilon", "must be positive");
  require(c.convergence_tol >= 0.0, "adam.convergence_tol", "must be non-negative");
  require(boundary == "clip" || boundary == "wrap", "adam.boundary", "must be \"clip\" or \"wrap\"");
  require(selection == "isolated" || selection == "joint", "adam.selection", "must be \"isolated\" or \"joint\"");
  c.boundary = boundary == "clip" ? PhaseBoundary::Clip : PhaseBoundary::Wrap;
  a.selection = selection == "isolated" ? RisSelection::Isolated : RisSelection::Joint;
  return a;
}

FigureSpec read_figures(Reader& root, std::vector<std::string>& defaulted) {
  FigureSpec f;
  Reader r(root.subtable("figures"), "figures", defaulted);
  if (const toml::array* a = r.array("n_values")) {
    f.n_values.clear();
    for (std::size_t i = 0; i < a->size(); ++i) {
      auto v = a->get(i)->value_exact<std::int64_t>();
      require(v && *v >= 1, "figures.n_values", "entries must be positive integers");
      f.n_values.push_back(static_cast<std::size_t>(*v));
    }
    require(!f.n_values.empty(), "figures.n_values", "must not be empty");
  }
  f.phase_points = r.count("phase_points", f.phase_points, 1);
  if (const toml::array* a = r.array("tx_power_sweep_w")) {
    f.tx_power_sweep_w.clear();
    for (std::size_t i = 0; i < a->size(); ++i) {
      const toml::node* n = a->get(i);
      std::optional<double> v = n->value_exact<double>();
      if (!v) {
        if (auto iv = n->value_exact<std::int64_t>()) v = static_cast<double>(*iv);
      }
      require(v && *v > 0.0, "figures.tx_power_sweep_w", "entries must be positive numbers");
      f.tx_power_sweep_w.push_back(*v);
    }
    require(!f.tx_power_sweep_w.empty(), "figures.tx_power_sweep_w", "must not be empty");
  }
  f.distance_min_m = r.number("distance_min_m", f.distance_min_m);
  f.distance_max_m = r.number("distance_max_m", f.distance_max_m);
  f.distance_points = r.count("distance_points", f.distance_points, 1);
  f.multistart_runs = r.count("multistart_runs", f.multistart_runs, 1);
  r.finish();
  require(f.distance_min_m > 0.0, "figures.distance_min_m", "must be positive");
  require(f.distance_max_m >= f.distance_min_m, "figures.distance_max_m", "must be >= distance_min_m");
  return f;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // keep it a TOML float
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::ostringstream out;
  out << '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out << '\\';
    out << c;
  }
  out << '"';
  return out.str();
}

} // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source_name) {
  toml::table root;
  try {
    root = toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    const auto& where = e.source().begin;
    throw Error(ErrorKind::Parse, std::string(source_name) + ":" + std::to_string(where.line) + ":" +
                                      std::to_string(where.column) + ": " + std::string(e.description()));
  }

  ExperimentConfig cfg;
  Reader r(&root, "", cfg.defaulted);
  if (const toml::node* n = r.find("seed")) {
    auto v = n->value_exact<std::int64_t>();
    require(v && *v >= 0, "seed", "must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(*v);
  }
  cfg.experiment = r.text("experiment", cfg.experiment);
  require(cfg.experiment == "baseline" || cfg.experiment == "ie" || cfg.experiment == "nie" ||
              cfg.experiment == "figures-all",
          "experiment", "must be one of baseline, ie, nie, figures-all");
  cfg.output_dir = r.text("output_dir", cfg.output_dir);
  cfg.scenario = read_scenario(r, cfg.defaulted);
  cfg.bpso = read_bpso(r, cfg.defaulted);
  cfg.adam = read_adam(r, cfg.defaulted);
  cfg.figures = read_figures(r, cfg.defaulted);
  r.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream o;
  const auto& s = cfg.scenario;
  if (cfg.seed) o << "seed = " << *cfg.seed << "\n";
  o << "experiment = " << quoted(cfg.experiment) << "\n";
  o << "output_dir = " << quoted(cfg.output_dir) << "\n\n";

  o << "[scenario]\nearth_radius_km = " << fmt_double(s.earth_radius_km) << "\n\n";
  o << "[scenario.satellite]\nlat_deg = " << fmt_double(s.satellite.lat_deg)
    << "\nlon_deg = " << fmt_double(s.satellite.lon_deg) << "\nalt_km = " << fmt_double(s.satellite.alt_km) << "\n\n";
  o << "[scenario.user]\nlat_deg = " << fmt_double(s.user.lat_deg) << "\nlon_deg = " << fmt_double(s.user.lon_deg)
    << "\n\n";
  o << "[scenario.rf]\nfrequency_ghz = " << fmt_double(s.frequency_ghz) << "\ntx_power_w = " << fmt_double(s.tx_power_w)
    << "\ntx_gain_dbi = " << fmt_double(s.tx_gain_dbi) << "\nrx_gain_dbi = " << fmt_double(s.rx_gain_dbi) << "\n\n";
  o << "[scenario.consumption]\ncircuit_mw = " << fmt_double(s.circuit_mw)
    << "\nelement_phase_mw = " << fmt_double(s.element_phase_mw)
    << "\nelement_control_mw = " << fmt_double(s.element_control_mw) << "\n\n";
  o << "[scenario.shadowing]\nmu_ru_db = " << fmt_double(s.mu_ru_db) << "\nsigma_ru_db = " << fmt_double(s.sigma_ru_db)
    << "\nmu_su_db = " << fmt_double(s.mu_su_db) << "\nsigma_su_db = " << fmt_double(s.sigma_su_db)
    << "\neta_sr_db = " << fmt_double(s.eta_sr_db) << "\n\n";
  for (const auto& p : s.ris) {
    o << "[[scenario.ris]]\nlat_deg = " << fmt_double(p.lat_deg) << "\nlon_deg = " << fmt_double(p.lon_deg)
      << "\nelements = " << p.elements << "\ngamma = " << fmt_double(p.gamma)
      << "\ngain_in_dbi = " << fmt_double(p.gain_in_dbi) << "\ngain_out_dbi = " << fmt_double(p.gain_out_dbi) << "\n";
    if (p.user_gain_dbi) o << "user_gain_dbi = " << fmt_double(*p.user_gain_dbi) << "\n";
    o << "\n";
  }

  const auto& b = cfg.bpso;
  o << "[bpso]\nswarm_size = " << b.config.swarm_size << "\nmax_iters = " << b.config.max_iters
    << "\ninertia = " << fmt_double(b.config.inertia) << "\ncognitive = " << fmt_double(b.config.cognitive)
    << "\nsocial = " << fmt_double(b.config.social) << "\nvelocity_limit = " << fmt_double(b.config.velocity_limit)
    << "\nmode = " << quoted(b.mode == ActivationMode::Pure ? "pure" : "constrained")
    << "\nmin_power_fraction = " << fmt_double(b.min_power_fraction) << "\n\n";

  const auto& a = cfg.adam.config;
  o << "[adam]\nlearning_rate = " << fmt_double(a.learning_rate) << "\nbeta1 = " << fmt_double(a.beta1)
    << "\nbeta2 = " << fmt_double(a.beta2) << "\nepsilon = " << fmt_double(a.epsilon)
    << "\nmc_samples = " << a.mc_samples << "\neval_samples = " << a.eval_samples << "\nmax_iters = " << a.max_iters
    << "\nconvergence_tol = " << fmt_double(a.convergence_tol) << "\npatience = " << a.patience
    << "\nboundary = " << quoted(a.boundary == PhaseBoundary::Clip ? "clip" : "wrap")
    << "\nselection = " << quoted(cfg.adam.selection == RisSelection::Isolated ? "isolated" : "joint") << "\n\n";

  const auto& f = cfg.figures;
  o << "[figures]\nn_values = [";
  for (std::size_t i = 0; i < f.n_values.size(); ++i) o << (i ? ", " : "") << f.n_values[i];
  o << "]\nphase_points = " << f.phase_points << "\ntx_power_sweep_w = [";
  for (std::size_t i = 0; i < f.tx_power_sweep_w.size(); ++i) o << (i ? ", " : "") << fmt_double(f.tx_power_sweep_w[i]);
  o << "]\ndistance_min_m = " << fmt_double(f.distance_min_m) << "\ndistance_max_m = " << fmt_double(f.distance_max_m)
    << "\ndistance_points = " << f.distance_points << "\nmultistart_runs = " << f.multistart_runs << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_config(cfg))));
  return buf;
}

Scenario ExperimentConfig::build_scenario() const {
  const ScenarioSpec& s = scenario;
  Scenario out;
  out.earth_radius = s.earth_radius_km * 1e3;
  out.satellite = {degrees_to_radians(s.satellite.lat_deg), degrees_to_radians(s.satellite.lon_deg),
                   s.satellite.alt_km * 1e3};
  out.user = {degrees_to_radians(s.user.lat_deg), degrees_to_radians(s.user.lon_deg), 0.0};
  out.rf.carrier_hz = s.frequency_ghz * 1e9;
  out.rf.tx_power_w = s.tx_power_w;
  out.rf.tx_gain = dbi_to_linear(s.tx_gain_dbi);
  out.rf.rx_gain = dbi_to_linear(s.rx_gain_dbi);
  out.consumption.circuit_w = s.circuit_mw * 1e-3;
  out.consumption.element_phase_w = s.element_phase_mw * 1e-3;
  out.consumption.element_control_w = s.element_control_mw * 1e-3;
  out.shadowing = {s.mu_ru_db, s.sigma_ru_db, s.mu_su_db, s.sigma_su_db, s.eta_sr_db};
  for (const auto& p : s.ris) {
    RisPanel panel = RisPanel::uniform(
        {degrees_to_radians(p.lat_deg), degrees_to_radians(p.lon_deg), 0.0}, p.elements, p.gamma);
    panel.gain_in = dbi_to_linear(p.gain_in_dbi);
    panel.gain_out = dbi_to_linear(p.gain_out_dbi);
    panel.user_gain = dbi_to_linear(p.user_gain_dbi.value_or(s.rx_gain_dbi));
    out.panels.push_back(std::move(panel));
  }
  return out;
}

} // namespace rissat
