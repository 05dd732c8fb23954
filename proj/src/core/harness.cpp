// SPDX-License-Identifier: Apache-2.0
#include "harness.hpp"

#include "energy.hpp"
#include "error.hpp"
#include "ideal_opt.hpp"
#include "nie_opt.hpp"
#include "rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>

namespace rissat {

namespace {

struct Schema {
  std::string_view name;
  std::string_view title;
  std::vector<std::pair<std::string_view, std::string_view>> columns;
};

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = {
      {"fig1_baseline_sweep",
       "Baseline efficiency, all elements active at one uniform phase, per element count.",
       {{"n_elements", "elements per RIS"},
        {"phase_rad", "uniform controllable phase, radians"},
        {"eta", "energy efficiency (received W / consumed W)"}}},
      {"fig2_per_ris_power_vs_distance",
       "Received power with each RIS alone as its distance to the user varies along its bearing.",
       {{"ris", "RIS index k, 1-based"},
        {"distance_m", "RIS-user distance, meters"},
        {"power_direct_w", "direct path only, watts"},
        {"power_cophased_w", "direct plus RIS k with co-phased elements, watts"},
        {"power_uniform_w", "direct plus RIS k with every phase 0, watts"}}},
      {"fig4_eta_vs_active_elements",
       "Efficiency against the number of active elements.",
       {{"active_elements", "number of active elements"},
        {"eta_baseline", "first elements in index order, phase 0"},
        {"eta_optimized", "strongest elements, co-phased"}}},
      {"fig5_eta_vs_pt",
       "Efficiency against transmit power.",
       {{"tx_power_w", "transmit power, watts"},
        {"eta_baseline", "all active, phase 0"},
        {"eta_optimized", "ideal-environment optimum eta*"}}},
      {"fig6_alpha_trace",
       "Adam effective learning rate per iteration.",
       {{"iteration", "Adam step t"}, {"effective_alpha", "mean over elements of alpha / (sqrt(v_hat) + eps)"}}},
      {"fig7_multistart",
       "Expected efficiency traces from independent random starts.",
       {{"run", "start index, 0-based"},
        {"iteration", "Adam step t (0 = initial phases)"},
        {"expected_eta", "Monte Carlo E[eta] on fixed evaluation draws"}}},
      {"fig8_eta_trace",
       "Expected efficiency per iteration of the main run.",
       {{"iteration", "Adam step t (0 = initial phases)"}, {"expected_eta", "Monte Carlo E[eta]"}}},
      {"fig9_eta_vs_phase",
       "Expected efficiency and mean phase per iteration of the main run.",
       {{"iteration", "Adam step t (0 = initial phases)"},
        {"expected_eta", "Monte Carlo E[eta]"},
        {"mean_phase_rad", "mean controllable phase over all elements, radians"}}},
      {"fig10_per_ris_max",
       "Peak expected efficiency of each RIS optimized on its own.",
       {{"ris", "RIS index k, 1-based"},
        {"max_expected_eta", "final E[eta] of the isolated run"},
        {"mean_phase_rad", "mean optimized phase, radians"}}},
  };
  return all;
}

const Schema& schema(std::string_view name) {
  for (const auto& s : schemas())
    if (s.name == name) return s;
  throw ValidationError("figure", "unknown table '" + std::string(name) + "'");
}

ResultTable make_table(std::string_view name) {
  std::vector<std::string> cols;
  for (const auto& c : schema(name).columns) cols.emplace_back(c.first);
  return ResultTable(std::string(name), std::move(cols));
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (auto& x : out) x = std::exp(x);
  return out;
}

/// Everything the table builders share; NIE runs are cached because several
/// tables read the same trace.
struct Context {
  const ExperimentConfig& cfg;
  Scenario scenario;
  std::uint64_t seed;

  std::once_flag ie_once, nie_once;
  IeResult ie;
  NieResult nie;

  IeOptions ie_options(std::string_view tag) const {
    IeOptions o;
    o.bpso = cfg.bpso.config;
    o.bpso.seed = derive_seed(seed, tag);
    o.mode = cfg.bpso.mode;
    o.min_power_fraction = cfg.bpso.min_power_fraction;
    return o;
  }

  AdamConfig adam(std::string_view tag, std::uint64_t index = 0) const {
    AdamConfig a = cfg.adam.config;
    a.seed = derive_seed(seed, tag, index);
    return a;
  }

  const IeResult& ie_result() {
    std::call_once(ie_once, [&] { ie = ie_optimize(scenario, ie_options("ie")); });
    return ie;
  }

  const NieResult& nie_result() {
    std::call_once(nie_once, [&] { nie = optimize_nie(scenario, adam("nie")); });
    return nie;
  }
};

using Builder = std::function<ResultTable(Context&)>;

ResultTable build_fig1(Context& ctx) {
  ResultTable t = make_table("fig1_baseline_sweep");
  const auto phases = linspace(0.0, kTwoPi, ctx.cfg.figures.phase_points);
  const auto sweep = baseline_eta_sweep(ctx.scenario, phases, ctx.cfg.figures.n_values);
  for (std::size_t i = 0; i < sweep.n_values.size(); ++i)
    for (std::size_t j = 0; j < phases.size(); ++j)
      t.add_row({static_cast<double>(sweep.n_values[i]), phases[j], sweep.eta[i][j]});
  return t;
}

ResultTable build_fig2(Context& ctx) {
  ResultTable t = make_table("fig2_per_ris_power_vs_distance");
  const Scenario& base = ctx.scenario;
  const auto distances = logspace(ctx.cfg.figures.distance_min_m, ctx.cfg.figures.distance_max_m,
                                  ctx.cfg.figures.distance_points);
  for (std::size_t k = 0; k < base.ris_count(); ++k) {
    const double bearing = initial_bearing(base.user, base.panels[k].position);
    for (double d : distances) {
      Scenario single = base.isolate(k);
      single.panels[0].position = destination_point(base.user, bearing, d, base.earth_radius);
      single.panels[0].position.alt = 0.0;
      const ShadowRealization shadow = mean_shadowing(single);
      const std::vector<std::uint8_t> on(single.element_count(), 1);
      const ComplexSignal direct = direct_signal(single, shadow.su_db);
      const double tx = single.rf.tx_power_w;
      const std::vector<double> zero(single.element_count(), 0.0);
      const double cophased =
          received_power(direct, reflected_signal(single, optimal_phases(single), shadow.ru_db, on), tx).total;
      const double uniform = received_power(direct, reflected_signal(single, zero, shadow.ru_db, on), tx).total;
      t.add_row({static_cast<double>(k + 1), d, tx * direct.amplitude * direct.amplitude, cophased, uniform});
    }
  }
  return t;
}

ResultTable build_fig4(Context& ctx) {
  ResultTable t = make_table("fig4_eta_vs_active_elements");
  for (const auto& p : eta_vs_active_elements(ctx.scenario))
    t.add_row({static_cast<double>(p.active), p.eta_baseline, p.eta_optimized});
  return t;
}

ResultTable build_fig5(Context& ctx) {
  ResultTable t = make_table("fig5_eta_vs_pt");
  for (double pt : ctx.cfg.figures.tx_power_sweep_w) {
    Scenario s = ctx.scenario;
    s.rf.tx_power_w = pt;
    const IeResult r = ie_optimize(s, ctx.ie_options("ie"));
    t.add_row({pt, r.eta_baseline, r.eta_star});
  }
  return t;
}

void add_eta_trace(ResultTable& t, const NieResult& r, bool with_phase, double run = -1.0) {
  auto row = [&](double it, double eta, double phase) {
    if (run >= 0.0)
      t.add_row({run, it, eta});
    else if (with_phase)
      t.add_row({it, eta, phase});
    else
      t.add_row({it, eta});
  };
  row(0.0, r.initial_expected_eta, r.initial_mean_phase);
  for (const auto& rec : r.trace.records) row(static_cast<double>(rec.iteration), rec.expected_eta, rec.mean_phase);
}

ResultTable build_fig6(Context& ctx) {
  ResultTable t = make_table("fig6_alpha_trace");
  for (const auto& rec : ctx.nie_result().trace.records)
    t.add_row({static_cast<double>(rec.iteration), rec.effective_alpha});
  return t;
}

ResultTable build_fig7(Context& ctx) {
  ResultTable t = make_table("fig7_multistart");
  for (std::size_t run = 0; run < ctx.cfg.figures.multistart_runs; ++run) {
    const NieResult r = optimize_nie(ctx.scenario, ctx.adam("fig7", run));
    add_eta_trace(t, r, false, static_cast<double>(run));
  }
  return t;
}

ResultTable build_fig8(Context& ctx) {
  ResultTable t = make_table("fig8_eta_trace");
  add_eta_trace(t, ctx.nie_result(), false);
  return t;
}

ResultTable build_fig9(Context& ctx) {
  ResultTable t = make_table("fig9_eta_vs_phase");
  const NieResult& r = ctx.nie_result();
  add_eta_trace(t, r, true);
  return t;
}

ResultTable build_fig10(Context& ctx) {
  ResultTable t = make_table("fig10_per_ris_max");
  for (const auto& row : per_ris_max_eta(ctx.scenario, ctx.adam("fig10")))
    t.add_row({static_cast<double>(row.k + 1), row.max_expected_eta, row.mean_phase});
  return t;
}

const std::map<std::string_view, Builder>& builders() {
  static const std::map<std::string_view, Builder> all = {
      {"fig1_baseline_sweep", build_fig1},   {"fig2_per_ris_power_vs_distance", build_fig2},
      {"fig4_eta_vs_active_elements", build_fig4}, {"fig5_eta_vs_pt", build_fig5},
      {"fig6_alpha_trace", build_fig6},      {"fig7_multistart", build_fig7},
      {"fig8_eta_trace", build_fig8},        {"fig9_eta_vs_phase", build_fig9},
      {"fig10_per_ris_max", build_fig10},
  };
  return all;
}

bool needs_seed(Experiment e) { return e == Experiment::Nie || e == Experiment::FiguresAll; }

bool runs_ie(Experiment e) { return e == Experiment::Ie || e == Experiment::FiguresAll; }

// One bit string per RIS, element 0 first.
nlohmann::json activation_json(const ActivationMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < m.rows(); ++k) {
    std::string row;
    for (std::size_t n = 0; n < m.row_sizes()[k]; ++n) row += m.at(k, n) ? '1' : '0';
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace

std::optional<Experiment> parse_experiment(std::string_view name) {
  if (name == "baseline") return Experiment::Baseline;
  if (name == "ie") return Experiment::Ie;
  if (name == "nie") return Experiment::Nie;
  if (name == "figures-all") return Experiment::FiguresAll;
  return std::nullopt;
}

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Baseline: return "baseline";
    case Experiment::Ie: return "ie";
    case Experiment::Nie: return "nie";
    case Experiment::FiguresAll: return "figures-all";
  }
  return "?";
}

ResultTable::ResultTable(std::string table_name, std::vector<std::string> column_names)
    : name(std::move(table_name)), columns(std::move(column_names)), values(columns.size()) {}

void ResultTable::add_row(std::initializer_list<double> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::Dimension, "row width differs from column count in " + name);
  std::size_t i = 0;
  for (double v : row) values[i++].push_back(v);
}

std::string ResultTable::to_csv() const {
  std::string out = "# table: " + name + "\n";
  for (const auto& [k, v] : metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += format_value(values[c][r]);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> experiment_tables(Experiment e) {
  switch (e) {
    case Experiment::Baseline: return {"fig1_baseline_sweep"};
    case Experiment::Ie: return {"fig2_per_ris_power_vs_distance", "fig4_eta_vs_active_elements", "fig5_eta_vs_pt"};
    case Experiment::Nie:
      return {"fig6_alpha_trace", "fig7_multistart", "fig8_eta_trace", "fig9_eta_vs_phase", "fig10_per_ris_max"};
    case Experiment::FiguresAll: return schema_names();
  }
  return {};
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index) {
  return mix64(master ^ mix64(fnv1a64(name) + index * 0x9e3779b97f4a7c15ULL));
}

RunReport run_experiment(const ExperimentConfig& cfg, Experiment which, const std::filesystem::path& out_dir) {
  if (needs_seed(which) && !cfg.seed)
    throw ValidationError("seed", "a seed is required for the " + std::string(experiment_name(which)) + " experiment");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + out_dir.string() + ": " + ec.message());

  Context ctx{cfg, cfg.build_scenario(), cfg.seed.value_or(0), {}, {}, {}, {}};
  const std::string hash = config_hash(cfg);
  const std::vector<std::string> names = experiment_tables(which);

  std::vector<std::optional<ResultTable>> tables(names.size());
  std::vector<std::string> errors(names.size());
  // Tables run in order; the parallelism lives inside the kernels.
  for (std::size_t i = 0; i < names.size(); ++i) {
    try {
      tables[i] = builders().at(names[i])(ctx);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }

  RunReport report;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!tables[i]) {
      report.failures.push_back(names[i] + ": " + errors[i]);
      continue;
    }
    ResultTable& t = *tables[i];
    t.metadata = {{"config_hash", hash},
                  {"seed", cfg.seed ? std::to_string(*cfg.seed) : "none"},
                  {"parameters", "configuration defaults apply to every field not set in the config; see summary.json"}};
    const auto path = out_dir / (names[i] + ".csv");
    write_file(path, t.to_csv());
    report.files.push_back(path);
  }

  nlohmann::ordered_json summary;
  summary["experiment"] = experiment_name(which);
  summary["config_hash"] = hash;
  summary["seed"] = cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr);
  {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    summary["generated_at"] = stamp;
  }
  summary["defaulted_fields"] = cfg.defaulted;

  try {
    if (runs_ie(which)) {
      const IeResult& ie = ctx.ie_result();
      summary["ie"] = {{"eta_star", ie.eta_star},
                       {"k_star", ie.k_star + 1},
                       {"activation", activation_json(ie.activation)},
                       {"active_elements", ie.activation.active_count()},
                       {"received_power_w", ie.received_power_w},
                       {"consumption_w", ie.consumption_w},
                       {"eta_cophased_all_active", ie.eta_cophased_all_active},
                       {"eta_baseline", ie.eta_baseline},
                       {"per_ris_power_w", ie.per_ris_power}};
    }
    if (needs_seed(which)) {
      const NieResult& nie = ctx.nie_result();
      summary["nie"] = {{"final_expected_eta", nie.final_expected_eta},
                        {"initial_expected_eta", nie.initial_expected_eta},
                        {"iterations", nie.trace.records.size()},
                        {"converged", nie.trace.converged},
                        {"k_star", select_best_ris(ctx.scenario, nie.theta, cfg.adam.selection) + 1},
                        {"theta_star", nie.theta}};
    }
  } catch (const std::exception& e) {
    report.failures.push_back(std::string("summary: ") + e.what());
  }
  summary["files"] = nlohmann::json::array();
  for (const auto& f : report.files) summary["files"].push_back(f.filename().string());
  summary["failures"] = report.failures;

  const auto summary_path = out_dir / "summary.json";
  write_file(summary_path, summary.dump(2) + "\n");
  report.files.push_back(summary_path);
  return report;
}

std::string describe_schema(std::string_view table) {
  const Schema& s = schema(table);
  std::string out = std::string(s.name) + ".csv\n" + std::string(s.title) + "\ncolumns:\n";
  for (const auto& [col, doc] : s.columns) out += "  " + std::string(col) + ": " + std::string(doc) + "\n";
  out += "leading lines starting with '#' carry table, config_hash, seed and parameter metadata\n";
  return out;
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& s : schemas()) out.emplace_back(s.name);
  return out;
}

} // namespace rissat
