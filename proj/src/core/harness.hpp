// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rissat {

enum class Experiment { Baseline, Ie, Nie, FiguresAll };

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

/// Named numeric columns plus string metadata, written as CSV with the
/// metadata in leading '#' comment lines.
struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values; // one vector per column
  std::vector<std::pair<std::string, std::string>> metadata;

  ResultTable(std::string table_name, std::vector<std::string> column_names);

  void add_row(std::initializer_list<double> row);
  std::size_t rows() const { return values.empty() ? 0 : values.front().size(); }
  std::string to_csv() const;
};

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> failures; // "<table>: <message>"
  bool ok() const { return failures.empty(); }
};

/// Tables the experiment produces, in output order.
std::vector<std::string> experiment_tables(Experiment e);

/// Computes and writes one CSV per table plus summary.json into out_dir.
/// A failing table is recorded in the report and the remaining tables still
/// run. Throws ValidationError if a stochastic experiment has no seed.
RunReport run_experiment(const ExperimentConfig& cfg, Experiment which, const std::filesystem::path& out_dir);

/// Column documentation for a table name (e.g. "fig4_eta_vs_active_elements").
/// Throws ValidationError for unknown names.
std::string describe_schema(std::string_view table);

/// All table names with a documented schema.
std::vector<std::string> schema_names();

/// Sub-seed for one named experiment component.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index = 0);

} // namespace rissat
