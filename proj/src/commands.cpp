#include "usecurate/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "usecurate/error.hpp"

namespace usecurate::commands {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "'");
  return in;
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
  if (path) {
    io::write_file_atomic(*path, content);
  } else {
    out << content;
  }
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::DegenerateScores) {
      err << "hint: pass an explicit --bandwidth\n";
    }
    return exit_status(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int score(const ScoreOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto in = open_input(opts.input);
    const io::ProbabilityTable table = io::read_probabilities(in, opts.renormalize);
    const EntropyScoreSet scores = score_pool(table.pool);
    std::ostringstream text;
    io::write_scores(text, scores);
    emit(opts.output, text.str(), out);
    return 0;
  });
}

int threshold(const ThresholdOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    opts.config.validate();
    auto in = open_input(opts.scores);
    const io::ScoreTable table = io::read_scores(in, opts.classes);
    const EntropyScoreSet& scores = table.scores;

    const double h = opts.config.bandwidth ? *opts.config.bandwidth : silverman_bandwidth(scores);
    const DensityGrid grid = DensityGrid::make(scores.k, opts.config.grid_points);
    const DensityEstimate est = fit_kde(scores, h, grid);
    const ReferenceCurve ref = make_reference(opts.config.reference, scores.k, grid);
    const UseThreshold t = find_threshold(est, ref);
    const FilterMask mask = apply_threshold(scores, t);

    io::PipelineReport report;
    report.command = "threshold";
    report.config = opts.config;
    report.n = scores.size();
    report.k = scores.k;
    report.bandwidth = h;
    report.bandwidth_source = opts.config.bandwidth ? "explicit" : "silverman";
    report.raw_mass = est.raw_mass;
    report.threshold = t;
    report.kept = mask.kept_count;
    report.discarded = mask.discarded_count;
    if (opts.config.emit_density) {
      report.density = &est;
      report.reference = &ref;
    }
    if (opts.timing) report.elapsed_ms = elapsed_ms(start);
    emit(opts.output, io::report_json(report).dump(2) + "\n", out);
    return 0;
  });
}

int filter(const FilterOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.report && !opts.u_star) {
      throw Error(ErrorCode::MissingThreshold, "pass --report or --u-star");
    }
    if (opts.report && opts.u_star) {
      throw Error(ErrorCode::MissingThreshold, "pass only one of --report and --u-star");
    }
    auto in = open_input(opts.scores);
    const io::ScoreTable table = io::read_scores(in, opts.classes);
    const EntropyScoreSet& scores = table.scores;

    UseThreshold t;
    if (opts.report) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(io::read_text_file(*opts.report));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MalformedInput, "report is not valid JSON: " + std::string(e.what()));
      }
      const io::ReportThreshold rt = io::threshold_from_report(j);
      if (rt.n != scores.size()) {
        throw Error(ErrorCode::MismatchedIds,
                    "report was computed on " + std::to_string(rt.n) + " samples, scores file has " +
                        std::to_string(scores.size()));
      }
      t = rt.threshold;
    } else {
      if (!std::isfinite(*opts.u_star) || *opts.u_star < 0.0) {
        throw Error(ErrorCode::MalformedInput, "--u-star must be a finite non-negative value");
      }
      t = keep_all_threshold(scores.k);
      t.u_star = *opts.u_star;
    }

    const FilterMask mask = apply_threshold(scores, t);
    std::ostringstream text;
    io::write_mask(text, scores, mask);
    if (opts.output) {
      io::write_file_atomic(*opts.output, text.str());
      out << "kept " << mask.kept_count << ", discarded " << mask.discarded_count << " (u* = "
          << io::format_double(mask.u_star) << ")\n";
    } else {
      out << text.str();
      err << "kept " << mask.kept_count << ", discarded " << mask.discarded_count << " (u* = "
          << io::format_double(mask.u_star) << ")\n";
    }
    return 0;
  });
}

int metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto in = open_input(opts.series);
    const std::vector<AccuracySeries> series = io::read_series(in);
    std::vector<RobustnessReport> reports;
    reports.reserve(series.size());
    for (const auto& s : series) reports.push_back(robustness_report(s));

    std::ostringstream csv;
    io::write_metrics_csv(csv, series, reports);
    emit(opts.output, csv.str(), out);
    if (opts.json_output) {
      io::write_file_atomic(*opts.json_output, io::metrics_json(series, reports).dump(2) + "\n");
    }
    return 0;
  });
}

int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    io::RunConfig cfg = opts.config;
    if (cfg.seed) cfg.scenario.seed = *cfg.seed;
    cfg.validate();

    ScenarioOptions so;
    so.bandwidth = cfg.bandwidth;
    so.grid_points = cfg.grid_points;
    so.reference = cfg.reference;
    const ScenarioResult res = run_scenario(cfg.scenario, so);
    const ReferenceCurve ref = make_reference(cfg.reference, cfg.scenario.k, res.estimate.grid);

    io::PipelineReport report;
    report.command = "simulate";
    report.config = cfg;
    report.n = res.pool.scores.size();
    report.k = res.pool.scores.k;
    report.bandwidth = res.estimate.bandwidth;
    report.bandwidth_source = cfg.bandwidth ? "explicit" : "silverman";
    report.raw_mass = res.estimate.raw_mass;
    report.threshold = res.threshold;
    report.kept = res.mask.kept_count;
    report.discarded = res.mask.discarded_count;
    report.quality = res.quality;
    report.density = &res.estimate;
    report.reference = &ref;
    if (opts.timing) report.elapsed_ms = elapsed_ms(start);

    if (opts.pool_output) {
      std::ostringstream pool;
      io::write_scores(pool, res.pool.scores, &res.pool.truth);
      io::write_file_atomic(*opts.pool_output, pool.str());
    }
    emit(opts.output, io::report_json(report).dump(2) + "\n", out);
    return 0;
  });
}

}  // namespace usecurate::commands
