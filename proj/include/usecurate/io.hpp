#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "usecurate/density.hpp"
#include "usecurate/entropy.hpp"
#include "usecurate/filter.hpp"
#include "usecurate/robustness.hpp"
#include "usecurate/synthetic.hpp"
#include "usecurate/threshold.hpp"

namespace usecurate::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kLogBase = "nats";
inline constexpr const char* kConfigEnvVar = "USE_CURATE_CONFIG";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Fixed 4-decimal text after rounding half away from zero.
std::string format_fixed4(double x);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// --- probabilities: header `sample_id,p_1,...,p_k` --------------------------

struct ProbabilityTable {
  std::vector<PoolEntry> pool;
  std::size_t k = 0;
};

/// Errors carry the 1-based line number of the offending row.
ProbabilityTable read_probabilities(std::istream& in, bool renormalize);

// --- scores: `# k=<k> log_base=nats` then `sample_id,entropy[,truth]` -------

struct ScoreTable {
  EntropyScoreSet scores;
  std::vector<Truth> truth;  // empty when the file has no truth column
};

ScoreTable read_scores(std::istream& in, std::optional<std::size_t> k_override = std::nullopt);
void write_scores(std::ostream& out, const EntropyScoreSet& scores,
                  const std::vector<Truth>* truth = nullptr);

// --- mask: `sample_id,entropy,decision` --------------------------------------

void write_mask(std::ostream& out, const EntropyScoreSet& scores, const FilterMask& mask);

// --- accuracy series: `series,r,accuracy` ------------------------------------

/// Rows are grouped by series name; series keep their first-seen order and
/// points keep file order.
std::vector<AccuracySeries> read_series(std::istream& in);

void write_metrics_csv(std::ostream& out, const std::vector<AccuracySeries>& series,
                       const std::vector<RobustnessReport>& reports);
nlohmann::json metrics_json(const std::vector<AccuracySeries>& series,
                            const std::vector<RobustnessReport>& reports);

// --- configuration -----------------------------------------------------------

struct RunConfig {
  std::size_t grid_points = kDefaultGridPoints;
  std::optional<double> bandwidth;
  ReferenceKind reference = ReferenceKind::UniformEntropyAxis;
  std::optional<std::uint64_t> seed;
  bool emit_density = false;
  std::string rounding = "half_away_from_zero";
  MixtureSpec scenario;

  void validate() const;
};

/// Overlays the keys present in `j` onto `cfg`. Unknown keys are rejected.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});
nlohmann::json config_json(const RunConfig& cfg);
nlohmann::json mixture_json(const MixtureSpec& spec);

// --- pipeline report ----------------------------------------------------------

struct PipelineReport {
  std::string command;
  RunConfig config;
  std::size_t n = 0;
  std::size_t k = 0;
  double bandwidth = 0.0;
  std::string bandwidth_source;
  double raw_mass = 0.0;
  UseThreshold threshold;
  std::size_t kept = 0;
  std::size_t discarded = 0;
  const DensityEstimate* density = nullptr;  // arrays emitted when non-null
  const ReferenceCurve* reference = nullptr;
  std::optional<FilterQuality> quality;
  std::optional<double> elapsed_ms;
};

nlohmann::json report_json(const PipelineReport& report);

/// Threshold recovered from a report written by report_json().
struct ReportThreshold {
  UseThreshold threshold;
  std::size_t n = 0;
};
ReportThreshold threshold_from_report(const nlohmann::json& j);

}  // namespace usecurate::io
