// use_curate: entropy-structure filtering of unlabeled pools and robustness
// metrics over accuracy-vs-contamination series.
//
//   use_curate score     --input probs.csv [--output scores.csv]
//   use_curate threshold --scores scores.csv [--output report.json]
//   use_curate filter    --scores scores.csv (--report report.json | --u-star U) [--output mask.csv]
//   use_curate metrics   --series series.csv [--output metrics.csv] [--json metrics.json]
//   use_curate simulate  [--config scenario.json] [--output report.json] [--pool-output pool.csv]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "usecurate/commands.hpp"
#include "usecurate/error.hpp"

namespace uc = usecurate;

namespace {

struct ConfigFlags {
  std::optional<std::string> config_path;
  std::optional<std::size_t> grid_points;
  std::optional<double> bandwidth;
  std::optional<std::string> reference;
  std::optional<std::uint64_t> seed;
  bool emit_density = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (overrides $USE_CURATE_CONFIG)");
  cmd->add_option("--grid-points", f.grid_points, "KDE grid resolution (>= 64)");
  cmd->add_option("--bandwidth", f.bandwidth, "explicit KDE bandwidth in nats");
  cmd->add_option("--reference", f.reference, "reference curve (uniform_entropy_axis)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_flag("--emit-density", f.emit_density, "include density/CDF arrays in the report");
}

// defaults < $USE_CURATE_CONFIG < --config < explicit flags
uc::io::RunConfig resolve_config(const ConfigFlags& f) {
  uc::io::RunConfig cfg;
  if (const char* env = std::getenv(uc::io::kConfigEnvVar); env && *env) {
    cfg = uc::io::load_config_file(env, cfg);
  }
  if (f.config_path) cfg = uc::io::load_config_file(*f.config_path, cfg);
  if (f.grid_points) cfg.grid_points = *f.grid_points;
  if (f.bandwidth) cfg.bandwidth = *f.bandwidth;
  if (f.reference) cfg.reference = uc::parse_reference_kind(*f.reference);
  if (f.seed) cfg.seed = *f.seed;
  if (f.emit_density) cfg.emit_density = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-structure curation of unlabeled pools"};
  app.require_subcommand(1);

  uc::commands::ScoreOptions score_opts;
  auto* score = app.add_subcommand("score", "per-sample entropy from probability vectors");
  score->add_option("--input,input", score_opts.input, "CSV: sample_id,p_1,...,p_k")->required();
  score->add_option("--output,-o", score_opts.output, "scores CSV (default stdout)");
  bool strict = false;
  score->add_flag("--no-renormalize", strict, "reject rows whose sum is not 1 within 1e-6");

  uc::commands::ThresholdOptions thr_opts;
  ConfigFlags thr_flags;
  auto* thr = app.add_subcommand("threshold", "estimate the entropy threshold u*");
  thr->add_option("--scores,scores", thr_opts.scores, "scores CSV")->required();
  thr->add_option("--output,-o", thr_opts.output, "report JSON (default stdout)");
  thr->add_option("--classes", thr_opts.classes, "class count when the file lacks '# k='");
  thr->add_flag("--timing", thr_opts.timing, "add wall time to the report");
  add_config_flags(thr, thr_flags);

  uc::commands::FilterOptions filt_opts;
  auto* filt = app.add_subcommand("filter", "write keep/discard decisions");
  filt->add_option("--scores,scores", filt_opts.scores, "scores CSV")->required();
  filt->add_option("--report", filt_opts.report, "threshold report JSON");
  filt->add_option("--u-star", filt_opts.u_star, "explicit threshold in nats");
  filt->add_option("--classes", filt_opts.classes, "class count when the file lacks '# k='");
  filt->add_option("--output,-o", filt_opts.output, "mask CSV (default stdout)");

  uc::commands::MetricsOptions met_opts;
  auto* met = app.add_subcommand("metrics", "robustness metrics per accuracy series");
  met->add_option("--series,series", met_opts.series, "CSV: series,r,accuracy")->required();
  met->add_option("--output,-o", met_opts.output, "metrics CSV (default stdout)");
  met->add_option("--json", met_opts.json_output, "metrics JSON");

  uc::commands::SimulateOptions sim_opts;
  ConfigFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "run the pipeline on a synthetic labeled pool");
  sim->add_option("--output,-o", sim_opts.output, "report JSON (default stdout)");
  sim->add_option("--pool-output", sim_opts.pool_output, "labeled scores CSV");
  sim->add_flag("--timing", sim_opts.timing, "add wall time to the report");
  add_config_flags(sim, sim_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*score) {
      score_opts.renormalize = !strict;
      return uc::commands::score(score_opts, std::cout, std::cerr);
    }
    if (*thr) {
      thr_opts.config = resolve_config(thr_flags);
      return uc::commands::threshold(thr_opts, std::cout, std::cerr);
    }
    if (*filt) return uc::commands::filter(filt_opts, std::cout, std::cerr);
    if (*met) return uc::commands::metrics(met_opts, std::cout, std::cerr);
    if (*sim) {
      sim_opts.config = resolve_config(sim_flags);
      return uc::commands::simulate(sim_opts, std::cout, std::cerr);
    }
  } catch (const uc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return uc::exit_status(e.code());
  }
  return 2;
}
