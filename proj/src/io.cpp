#include "usecurate/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include "usecurate/error.hpp"

namespace usecurate::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_fixed4(double x) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, round_half_away(x, 4), std::chars_format::fixed, 4);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read failed for '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoFailure, "cannot move output into '" + path.string() + "'");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string at_line(std::size_t line_no, const std::string& msg) {
  return "line " + std::to_string(line_no) + ": " + msg;
}

double parse_number(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::MalformedInput,
                at_line(line_no, "cannot parse '" + std::string(field) + "' as a number"));
  }
  return value;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

// Reads lines, tracking 1-based numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (number_ == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

}  // namespace

ProbabilityTable read_probabilities(std::istream& in, bool renormalize) {
  LineReader reader(in);
  std::string line;
  std::vector<std::string_view> header;
  std::string header_line;
  while (reader.next(line)) {
    if (skippable(line)) continue;
    header_line = line;
    header = split_fields(header_line);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::EmptyPool, "input has no header");
  if (header.front() != "sample_id") {
    throw Error(ErrorCode::MalformedInput,
                at_line(reader.number(), "header must start with 'sample_id'"));
  }
  const std::size_t k = header.size() - 1;
  if (k < 2) {
    throw Error(ErrorCode::TooFewClasses,
                at_line(reader.number(), "header declares " + std::to_string(k) + " classes"));
  }

  ProbabilityTable table;
  table.k = k;
  std::unordered_set<std::string> seen;
  std::vector<double> raw(k);
  while (reader.next(line)) {
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    const std::size_t ln = reader.number();
    if (fields.size() != k + 1) {
      throw Error(ErrorCode::MixedClassCounts,
                  at_line(ln, "row has " + std::to_string(fields.size() - 1) +
                                  " probabilities, header declares " + std::to_string(k)));
    }
    std::string id(fields[0]);
    if (id.empty()) throw Error(ErrorCode::MalformedInput, at_line(ln, "empty sample_id"));
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::MismatchedIds, at_line(ln, "duplicate sample_id '" + id + "'"));
    }
    for (std::size_t c = 0; c < k; ++c) raw[c] = parse_number(fields[c + 1], ln);
    try {
      table.pool.emplace_back(std::move(id), validate_distribution(raw, renormalize));
    } catch (const Error& e) {
      throw Error(e.code(), at_line(ln, e.what()));
    }
  }
  if (table.pool.empty()) throw Error(ErrorCode::EmptyPool, "input has no data rows");
  return table;
}

ScoreTable read_scores(std::istream& in, std::optional<std::size_t> k_override) {
  LineReader reader(in);
  std::string line;
  std::optional<std::size_t> k_declared;
  std::vector<std::string_view> header;
  std::string header_line;
  while (reader.next(line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const auto pos = t.find("k=");
      if (pos != std::string_view::npos) {
        std::size_t k = 0;
        const char* first = t.data() + pos + 2;
        const auto res = std::from_chars(first, t.data() + t.size(), k);
        if (res.ec != std::errc()) {
          throw Error(ErrorCode::MalformedInput, at_line(reader.number(), "bad k= declaration"));
        }
        k_declared = k;
      }
      continue;
    }
    header_line = line;
    header = split_fields(header_line);
    break;
  }
  if (header.empty()) throw Error(ErrorCode::EmptyPool, "scores file has no header");
  if (header.size() < 2 || header[0] != "sample_id" || header[1] != "entropy") {
    throw Error(ErrorCode::MalformedInput,
                at_line(reader.number(), "header must be 'sample_id,entropy[,truth]'"));
  }
  const bool has_truth = header.size() >= 3 && header[2] == "truth";
  const std::size_t columns = has_truth ? 3 : 2;
  if (header.size() != columns) {
    throw Error(ErrorCode::MalformedInput, at_line(reader.number(), "unexpected extra columns"));
  }

  const std::optional<std::size_t> k = k_override ? k_override : k_declared;
  if (!k) {
    throw Error(ErrorCode::MalformedInput,
                "scores file does not declare k (expected a '# k=<classes>' line)");
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<Truth> truth;
  std::unordered_set<std::string> seen;
  while (reader.next(line)) {
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    const std::size_t ln = reader.number();
    if (fields.size() != columns) {
      throw Error(ErrorCode::MalformedInput, at_line(ln, "expected " + std::to_string(columns) +
                                                             " fields, got " +
                                                             std::to_string(fields.size())));
    }
    std::string id(fields[0]);
    if (id.empty()) throw Error(ErrorCode::MalformedInput, at_line(ln, "empty sample_id"));
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::MismatchedIds, at_line(ln, "duplicate sample_id '" + id + "'"));
    }
    ids.push_back(std::move(id));
    values.push_back(parse_number(fields[1], ln));
    if (has_truth) {
      try {
        truth.push_back(parse_truth(fields[2]));
      } catch (const Error& e) {
        throw Error(e.code(), at_line(ln, e.what()));
      }
    }
  }
  if (values.empty()) throw Error(ErrorCode::EmptyPool, "scores file has no data rows");

  ScoreTable out;
  out.scores = make_score_set(std::move(ids), std::move(values), *k);
  out.truth = std::move(truth);
  return out;
}

void write_scores(std::ostream& out, const EntropyScoreSet& scores, const std::vector<Truth>* truth) {
  out << "# k=" << scores.k << " log_base=" << kLogBase << '\n';
  out << (truth ? "sample_id,entropy,truth\n" : "sample_id,entropy\n");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << scores.sample_ids[i] << ',' << format_double(scores.scores[i]);
    if (truth) out << ',' << to_string((*truth)[i]);
    out << '\n';
  }
}

void write_mask(std::ostream& out, const EntropyScoreSet& scores, const FilterMask& mask) {
  out << "sample_id,entropy,decision\n";
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out << mask.sample_ids[i] << ',' << format_double(scores.scores[i]) << ','
        << to_string(mask.decisions[i]) << '\n';
  }
}

std::vector<AccuracySeries> read_series(std::istream& in) {
  LineReader reader(in);
  std::string line;
  bool header_seen = false;
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<AccuracyPoint>> groups;
  while (reader.next(line)) {
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    const std::size_t ln = reader.number();
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "series" || fields[1] != "r" ||
          fields[2] != "accuracy") {
        throw Error(ErrorCode::MalformedInput, at_line(ln, "header must be 'series,r,accuracy'"));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::MalformedInput, at_line(ln, "expected 3 fields"));
    }
    std::string name(fields[0]);
    if (name.empty()) throw Error(ErrorCode::MalformedInput, at_line(ln, "empty series name"));
    const AccuracyPoint p{parse_number(fields[1], ln), parse_number(fields[2], ln)};
    auto [it, inserted] = groups.try_emplace(name);
    if (inserted) order.push_back(name);
    it->second.push_back(p);
  }
  if (!header_seen) throw Error(ErrorCode::EmptyPool, "series file has no header");
  if (order.empty()) throw Error(ErrorCode::EmptyPool, "series file has no data rows");

  std::vector<AccuracySeries> out;
  out.reserve(order.size());
  for (const auto& name : order) out.emplace_back(name, std::move(groups[name]));
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<AccuracySeries>& series,
                       const std::vector<RobustnessReport>& reports) {
  out << "series,avg,rslope,gm,bad,wad,p_ad\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& m = reports[i];
    out << series[i].name() << ',' << format_fixed4(m.avg) << ',' << format_fixed4(m.rslope) << ','
        << format_fixed4(m.gm) << ',' << format_fixed4(m.bad) << ',' << format_fixed4(m.wad) << ','
        << format_fixed4(m.p_ad) << '\n';
  }
}

json metrics_json(const std::vector<AccuracySeries>& series,
                  const std::vector<RobustnessReport>& reports) {
  json rows = json::array();
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& m = reports[i];
    json points = json::array();
    for (const auto& p : series[i].points()) points.push_back({p.r, p.accuracy});
    rows.push_back({{"series", series[i].name()},
                    {"points", points},
                    {"avg", m.avg},
                    {"rslope", m.rslope},
                    {"gm", m.gm},
                    {"bad", m.bad},
                    {"wad", m.wad},
                    {"p_ad", m.p_ad}});
  }
  return {{"schema_version", kSchemaVersion},
          {"command", "metrics"},
          {"rounding", "half_away_from_zero"},
          {"series", rows}};
}

// --- configuration -----------------------------------------------------------

void RunConfig::validate() const {
  if (grid_points < kMinGridPoints) {
    throw Error(ErrorCode::InvalidConfig,
                "grid_points must be >= " + std::to_string(kMinGridPoints));
  }
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw Error(ErrorCode::BandwidthNonPositive, "bandwidth must be positive");
  }
  if (rounding != "half_away_from_zero") {
    throw Error(ErrorCode::InvalidConfig, "unsupported rounding mode '" + rounding + "'");
  }
}

namespace {

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidConfig, std::string("config key '") + key + "' has the wrong type");
  }
}

void apply_mixture_json(MixtureSpec& spec, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "'scenario' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "k") {
      spec.k = get_as<std::size_t>(value, "scenario.k");
    } else if (key == "n") {
      spec.n = get_as<std::size_t>(value, "scenario.n");
    } else if (key == "weights") {
      const auto w = get_as<std::vector<double>>(value, "scenario.weights");
      if (w.size() != 3) throw Error(ErrorCode::InvalidWeights, "weights needs 3 entries");
      spec.weights = {w[0], w[1], w[2]};
    } else if (key == "mu_id") {
      spec.mu_id = get_as<double>(value, "scenario.mu_id");
    } else if (key == "sd_id") {
      spec.sd_id = get_as<double>(value, "scenario.sd_id");
    } else if (key == "mu_far") {
      spec.mu_far = get_as<double>(value, "scenario.mu_far");
    } else if (key == "sd_far") {
      spec.sd_far = get_as<double>(value, "scenario.sd_far");
    } else if (key == "seed") {
      spec.seed = get_as<std::uint64_t>(value, "scenario.seed");
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown scenario key '" + key + "'");
    }
  }
}

}  // namespace

void apply_config_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "grid_points") {
      cfg.grid_points = get_as<std::size_t>(value, "grid_points");
    } else if (key == "bandwidth") {
      if (value.is_null()) {
        cfg.bandwidth.reset();
      } else {
        cfg.bandwidth = get_as<double>(value, "bandwidth");
      }
    } else if (key == "reference") {
      cfg.reference = parse_reference_kind(get_as<std::string>(value, "reference"));
    } else if (key == "seed") {
      if (value.is_null()) {
        cfg.seed.reset();
      } else {
        cfg.seed = get_as<std::uint64_t>(value, "seed");
      }
    } else if (key == "emit_density") {
      cfg.emit_density = get_as<bool>(value, "emit_density");
    } else if (key == "rounding") {
      cfg.rounding = get_as<std::string>(value, "rounding");
    } else if (key == "scenario") {
      apply_mixture_json(cfg.scenario, value);
    } else if (key == "log_base") {
      if (get_as<std::string>(value, "log_base") != kLogBase) {
        throw Error(ErrorCode::InvalidConfig, "only natural-log entropy (nats) is supported");
      }
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, "'" + path.string() + "': " + e.what());
  }
  apply_config_json(base, j);
  return base;
}

json mixture_json(const MixtureSpec& spec) {
  return {{"k", spec.k},
          {"n", spec.n},
          {"weights", {spec.weights[0], spec.weights[1], spec.weights[2]}},
          {"mu_id", spec.mu_id},
          {"sd_id", spec.sd_id},
          {"mu_far", spec.mu_far},
          {"sd_far", spec.sd_far},
          {"seed", spec.seed}};
}

json config_json(const RunConfig& cfg) {
  json j{{"grid_points", cfg.grid_points},
         {"bandwidth", cfg.bandwidth ? json(*cfg.bandwidth) : json(nullptr)},
         {"reference", std::string(to_string(cfg.reference))},
         {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
         {"emit_density", cfg.emit_density},
         {"rounding", cfg.rounding},
         {"log_base", kLogBase}};
  return j;
}

// --- pipeline report ----------------------------------------------------------

json report_json(const PipelineReport& r) {
  const auto& t = r.threshold;
  const double log_k = std::log(static_cast<double>(r.k));
  json threshold{{"u_star", t.u_star},
                 {"u_star_fraction", t.u_star / log_k},
                 {"crossing_found", t.crossing_found},
                 {"fallback", std::string(to_string(t.fallback))},
                 {"refinement_iters", t.refinement_iters},
                 {"bracket_index", t.bracket_index ? json(*t.bracket_index) : json(nullptr)},
                 {"residual", t.residual},
                 {"slope_at_crossing", t.slope_at_crossing},
                 {"rejected_crossings", t.rejected_crossings},
                 {"argmax_delta_index", t.argmax_delta_index},
                 {"argmax_delta_u", t.argmax_delta_u}};

  json j{{"schema_version", kSchemaVersion},
         {"command", r.command},
         {"log_base", kLogBase},
         {"config", config_json(r.config)},
         {"n", r.n},
         {"k", r.k},
         {"max_entropy", log_k},
         {"bandwidth", r.bandwidth},
         {"bandwidth_source", r.bandwidth_source},
         {"kde", {{"kernel", "gaussian"}, {"boundary", "reflection"}, {"raw_mass", r.raw_mass}}},
         {"threshold", threshold},
         {"mask", {{"kept", r.kept}, {"discarded", r.discarded}}}};

  if (r.command == "simulate") j["scenario"] = mixture_json(r.config.scenario);
  if (r.quality) {
    j["quality"] = {{"precision", r.quality->precision},
                    {"recall", r.quality->recall},
                    {"recall_near", r.quality->recall_near},
                    {"recall_far", r.quality->recall_far},
                    {"id_discard_fraction", r.quality->id_discard_fraction}};
  }
  if (r.density) {
    json arrays{{"u", r.density->grid.u_values},
                {"density", r.density->density},
                {"density_deriv", r.density->density_deriv},
                {"cdf", r.density->cdf}};
    if (r.reference) {
      arrays["reference_cdf"] = r.reference->cdf;
      arrays["reference_density"] = r.reference->slope;
    }
    j["density"] = std::move(arrays);
  }
  if (r.elapsed_ms) j["timing_ms"] = *r.elapsed_ms;
  return j;
}

ReportThreshold threshold_from_report(const json& j) {
  try {
    if (!j.contains("threshold") || !j.at("threshold").contains("u_star")) {
      throw Error(ErrorCode::MissingThreshold, "report has no threshold.u_star");
    }
    if (j.contains("log_base") && j.at("log_base").get<std::string>() != kLogBase) {
      throw Error(ErrorCode::MalformedInput, "report entropy is not in nats");
    }
    ReportThreshold out;
    const auto& t = j.at("threshold");
    out.threshold.k = j.at("k").get<std::size_t>();
    out.n = j.at("n").get<std::size_t>();
    out.threshold.u_star = t.at("u_star").get<double>();
    out.threshold.crossing_found = t.value("crossing_found", false);
    out.threshold.fallback =
        t.value("fallback", std::string("KeepAll")) == "None" ? Fallback::None : Fallback::KeepAll;
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("bad report: ") + e.what());
  }
}

}  // namespace usecurate::io
