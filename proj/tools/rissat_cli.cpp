// SPDX-License-Identifier: Apache-2.0
// Command-line front end; talks to the library only through the C API.
#include <rissat/rissat.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitExperiment = 3;

using ConfigPtr = std::unique_ptr<rissat_config, decltype(&rissat_config_free)>;

bool is_config_error(rissat_status s) {
  return s == RISSAT_ERR_PARSE || s == RISSAT_ERR_VALIDATION || s == RISSAT_ERR_DOMAIN ||
         s == RISSAT_ERR_GEOMETRY || s == RISSAT_ERR_DIMENSION || s == RISSAT_ERR_INVALID_ARGUMENT;
}

int report(const char* what) {
  std::fprintf(stderr, "rissat: %s: %s\n", what, rissat_last_error());
  return 0;
}

ConfigPtr load(const std::string& path, rissat_status& status) {
  rissat_config* raw = nullptr;
  status = rissat_config_load(path.c_str(), &raw);
  return ConfigPtr(raw, &rissat_config_free);
}

std::string fetch(rissat_status (*get)(const rissat_config*, char*, size_t, size_t*), const rissat_config* cfg) {
  size_t n = 0;
  if (get(cfg, nullptr, 0, &n) != RISSAT_OK) return {};
  std::string s(n + 1, '\0');
  get(cfg, s.data(), s.size(), &n);
  s.resize(n);
  return s;
}

int cmd_run(const std::string& path, const std::string& experiment, const std::string& out,
            std::optional<std::uint64_t> seed) {
  rissat_status st;
  ConfigPtr cfg = load(path, st);
  if (st != RISSAT_OK) {
    report("config");
    return st == RISSAT_ERR_IO ? kExitConfig : (is_config_error(st) ? kExitConfig : kExitExperiment);
  }
  if (seed) rissat_config_set_seed(cfg.get(), *seed);
  st = rissat_run_experiment(cfg.get(), experiment.c_str(), out.c_str());
  if (st == RISSAT_OK) {
    std::printf("%s: wrote results to %s (config %s)\n", experiment.c_str(), out.c_str(),
                fetch(rissat_config_hash, cfg.get()).c_str());
    return kExitOk;
  }
  report(experiment.c_str());
  return st == RISSAT_ERR_VALIDATION ? kExitConfig : kExitExperiment;
}

int cmd_validate(const std::string& path) {
  rissat_status st;
  ConfigPtr cfg = load(path, st);
  if (st != RISSAT_OK) {
    report("config");
    return kExitConfig;
  }
  std::printf("ok: %s (config %s, experiment %s)\n", path.c_str(), fetch(rissat_config_hash, cfg.get()).c_str(),
              fetch(rissat_config_experiment, cfg.get()).c_str());
  return kExitOk;
}

int cmd_describe(const std::string& figure) {
  size_t n = 0;
  if (rissat_describe_schema(figure.c_str(), nullptr, 0, &n) != RISSAT_OK) {
    report("describe-schema");
    size_t m = 0;
    rissat_schema_names(nullptr, 0, &m);
    std::string names(m + 1, '\0');
    rissat_schema_names(names.data(), names.size(), &m);
    names.resize(m);
    std::fprintf(stderr, "known tables:\n%s", names.c_str());
    return kExitConfig;
  }
  std::string text(n + 1, '\0');
  rissat_describe_schema(figure.c_str(), text.data(), text.size(), &n);
  text.resize(n);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-efficiency experiments for RIS-assisted satellite downlinks"};
  app.set_version_flag("--version", std::string(rissat_version()));
  app.require_subcommand(1);

  std::string config_path, experiment = "figures-all", out_dir, figure;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV tables plus summary.json");
  run->add_option("config", config_path, "TOML configuration file")->required();
  run->add_option("--experiment", experiment, "baseline | ie | nie | figures-all")
      ->check(CLI::IsMember({"baseline", "ie", "nie", "figures-all"}));
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Master seed (overrides the config)");

  auto* validate = app.add_subcommand("validate", "Parse and validate a configuration");
  validate->add_option("config", config_path, "TOML configuration file")->required();

  auto* describe = app.add_subcommand("describe-schema", "Document the columns of an output table");
  describe->add_option("figure", figure, "Table name, e.g. fig8_eta_trace")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, experiment, out_dir, seed);
  if (*validate) return cmd_validate(config_path);
  return cmd_describe(figure);
}
