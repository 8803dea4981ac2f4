#pragma once

// Subcommands of the use_curate tool. Each returns the process exit status:
// 0 success, 2 input validation, 3 degenerate data, 4 I/O failure.
// Diagnostics go to `err`; when no output path is given, results go to `out`.

#include <iosfwd>
#include <optional>
#include <string>

#include "usecurate/io.hpp"

namespace usecurate::commands {

struct ScoreOptions {
  std::string input;
  std::optional<std::string> output;
  bool renormalize = true;
};

struct ThresholdOptions {
  std::string scores;
  std::optional<std::string> output;
  std::optional<std::size_t> classes;  // overrides the file's k declaration
  io::RunConfig config;
  bool timing = false;
};

struct FilterOptions {
  std::string scores;
  std::optional<std::string> report;
  std::optional<double> u_star;
  std::optional<std::size_t> classes;
  std::optional<std::string> output;
};

struct MetricsOptions {
  std::string series;
  std::optional<std::string> output;       // CSV
  std::optional<std::string> json_output;  // JSON
};

struct SimulateOptions {
  io::RunConfig config;
  std::optional<std::string> output;       // report JSON
  std::optional<std::string> pool_output;  // labeled scores CSV
  bool timing = false;
};

int score(const ScoreOptions& opts, std::ostream& out, std::ostream& err);
int threshold(const ThresholdOptions& opts, std::ostream& out, std::ostream& err);
int filter(const FilterOptions& opts, std::ostream& out, std::ostream& err);
int metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err);
int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace usecurate::commands
