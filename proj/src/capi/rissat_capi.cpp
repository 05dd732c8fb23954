// SPDX-License-Identifier: Apache-2.0
#include <rissat/rissat.h>

#include "channel.hpp"
#include "config.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "ideal_opt.hpp"
#include "nie_opt.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

struct rissat_config {
  rissat::ExperimentConfig cfg;
};

namespace {

thread_local std::string last_error;

rissat_status fail(rissat_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

rissat_status from_kind(rissat::ErrorKind k) {
  using rissat::ErrorKind;
  switch (k) {
    case ErrorKind::Domain: return RISSAT_ERR_DOMAIN;
    case ErrorKind::Geometry: return RISSAT_ERR_GEOMETRY;
    case ErrorKind::Dimension: return RISSAT_ERR_DIMENSION;
    case ErrorKind::Parse: return RISSAT_ERR_PARSE;
    case ErrorKind::Validation: return RISSAT_ERR_VALIDATION;
    case ErrorKind::Experiment: return RISSAT_ERR_EXPERIMENT;
    case ErrorKind::Io: return RISSAT_ERR_IO;
  }
  return RISSAT_ERR_INTERNAL;
}

template <class F>
rissat_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const rissat::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RISSAT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RISSAT_ERR_INTERNAL, e.what());
  }
}

rissat_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size();
  if (!buf) return RISSAT_OK;
  if (cap <= s.size()) {
    if (cap > 0) buf[0] = '\0';
    return fail(RISSAT_ERR_INVALID_ARGUMENT, "buffer too small");
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  return RISSAT_OK;
}

rissat_status null_arg(const char* what) { return fail(RISSAT_ERR_INVALID_ARGUMENT, std::string(what) + " is null"); }

} // namespace

extern "C" {

const char* rissat_last_error(void) { return last_error.c_str(); }

const char* rissat_version(void) { return "0.1.0"; }

rissat_status rissat_config_load(const char* path, rissat_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new rissat_config{rissat::load_config(path)};
    return RISSAT_OK;
  });
}

rissat_status rissat_config_parse(const char* toml_text, rissat_config** out) {
  if (!toml_text) return null_arg("toml_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new rissat_config{rissat::parse_config(toml_text, "<string>")};
    return RISSAT_OK;
  });
}

void rissat_config_free(rissat_config* cfg) { delete cfg; }

rissat_status rissat_config_set_seed(rissat_config* cfg, uint64_t seed) {
  if (!cfg) return null_arg("cfg");
  cfg->cfg.seed = seed;
  return RISSAT_OK;
}

int rissat_config_get_seed(const rissat_config* cfg, uint64_t* seed) {
  if (!cfg || !cfg->cfg.seed) return 0;
  if (seed) *seed = *cfg->cfg.seed;
  return 1;
}

rissat_status rissat_config_hash(const rissat_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { return copy_out(rissat::config_hash(cfg->cfg), buf, cap, needed); });
}

rissat_status rissat_config_serialize(const rissat_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { return copy_out(rissat::serialize_config(cfg->cfg), buf, cap, needed); });
}

rissat_status rissat_config_experiment(const rissat_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { return copy_out(cfg->cfg.experiment, buf, cap, needed); });
}

rissat_status rissat_describe_schema(const char* table, char* buf, size_t cap, size_t* needed) {
  if (!table) return null_arg("table");
  return guarded([&] { return copy_out(rissat::describe_schema(table), buf, cap, needed); });
}

rissat_status rissat_schema_names(char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    std::string all;
    for (const auto& n : rissat::schema_names()) all += n + "\n";
    return copy_out(all, buf, cap, needed);
  });
}

rissat_status rissat_run_experiment(const rissat_config* cfg, const char* experiment, const char* out_dir) {
  if (!cfg) return null_arg("cfg");
  if (!experiment) return null_arg("experiment");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] {
    const auto which = rissat::parse_experiment(experiment);
    if (!which)
      return fail(RISSAT_ERR_VALIDATION,
                  std::string("experiment: unknown name '") + experiment + "' (baseline, ie, nie, figures-all)");
    const auto report = rissat::run_experiment(cfg->cfg, *which, out_dir);
    if (report.ok()) return RISSAT_OK;
    std::string msg;
    for (const auto& f : report.failures) msg += (msg.empty() ? "" : "; ") + f;
    return fail(RISSAT_ERR_EXPERIMENT, msg);
  });
}

rissat_status rissat_path_loss_db(double carrier_hz, double distance_m, double excess_db, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = rissat::path_loss_db(carrier_hz, distance_m, excess_db);
    return RISSAT_OK;
  });
}

rissat_status rissat_ie_optimize(const rissat_config* cfg, rissat_ie_summary* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    rissat::IeOptions o;
    o.bpso = cfg->cfg.bpso.config;
    o.bpso.seed = rissat::derive_seed(cfg->cfg.seed.value_or(0), "ie");
    o.mode = cfg->cfg.bpso.mode;
    o.min_power_fraction = cfg->cfg.bpso.min_power_fraction;
    const auto r = rissat::ie_optimize(cfg->cfg.build_scenario(), o);
    *out = {r.eta_star, r.eta_baseline, r.eta_cophased_all_active, r.received_power_w,
            r.consumption_w, r.k_star + 1, r.activation.active_count()};
    return RISSAT_OK;
  });
}

rissat_status rissat_nie_optimize(const rissat_config* cfg, rissat_nie_summary* out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  if (!cfg->cfg.seed) return fail(RISSAT_ERR_VALIDATION, "seed: required for the nie optimizer");
  return guarded([&] {
    rissat::AdamConfig a = cfg->cfg.adam.config;
    a.seed = rissat::derive_seed(*cfg->cfg.seed, "nie");
    const auto r = rissat::optimize_nie(cfg->cfg.build_scenario(), a);
    *out = {r.initial_expected_eta, r.final_expected_eta, r.trace.records.size(), r.trace.converged ? 1 : 0};
    return RISSAT_OK;
  });
}

} // extern "C"
