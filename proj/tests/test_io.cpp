#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "usecurate/io.hpp"

using namespace usecurate;
using testing::code_of;
namespace fs = std::filesystem;

namespace {

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = d(rng);
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(std::log(4.0)).rfind("1.386294", 0) == 0);
  CHECK(io::format_double(0.0) == "0");
}

TEST_CASE("format_fixed4") {
  CHECK(io::format_fixed4(0.66443333) == "0.6644");
  CHECK(io::format_fixed4(-0.00004) == "0.0000");
  CHECK(io::format_fixed4(0.2) == "0.2000");
  CHECK(io::format_fixed4(-0.08600000001) == "-0.0860");
}

TEST_CASE("read_probabilities") {
  SUBCASE("well formed, with BOM, comments and blank lines") {
    std::istringstream in("\xEF\xBB\xBFsample_id,p1,p2,p3\n# note\n\na,1,0,0\nb, 0.5 ,0.5,0\r\n");
    const auto t = io::read_probabilities(in, true);
    CHECK(t.k == 3);
    REQUIRE(t.pool.size() == 2);
    CHECK(t.pool[1].first == "b");
    CHECK(t.pool[1].second.probs()[0] == 0.5);
  }
  SUBCASE("bad sum reports its line") {
    std::istringstream in("sample_id,p1,p2\na,0.5,0.5\nb,0.6,0.6\n");
    const auto msg = message_of([&] { io::read_probabilities(in, true); });
    CHECK(msg.find("line 3") != std::string::npos);
    std::istringstream again("sample_id,p1,p2\na,0.5,0.5\nb,0.6,0.6\n");
    CHECK(code_of([&] { io::read_probabilities(again, true); }) == ErrorCode::SumOutOfRange);
  }
  SUBCASE("ragged row") {
    std::istringstream in("sample_id,p1,p2\na,0.5,0.5\nb,0.2,0.3,0.5\n");
    CHECK(code_of([&] { io::read_probabilities(in, true); }) == ErrorCode::MixedClassCounts);
  }
  SUBCASE("duplicate ids") {
    std::istringstream in("sample_id,p1,p2\na,0.5,0.5\na,0.5,0.5\n");
    CHECK(code_of([&] { io::read_probabilities(in, true); }) == ErrorCode::MismatchedIds);
  }
  SUBCASE("unparseable number") {
    std::istringstream in("sample_id,p1,p2\na,0.5,half\n");
    CHECK(message_of([&] { io::read_probabilities(in, true); }).find("line 2") !=
          std::string::npos);
  }
  SUBCASE("empty inputs") {
    std::istringstream none("");
    CHECK(code_of([&] { io::read_probabilities(none, true); }) == ErrorCode::EmptyPool);
    std::istringstream header_only("sample_id,p1,p2\n");
    CHECK(code_of([&] { io::read_probabilities(header_only, true); }) == ErrorCode::EmptyPool);
  }
  SUBCASE("wrong header") {
    std::istringstream in("id,p1,p2\na,0.5,0.5\n");
    CHECK(code_of([&] { io::read_probabilities(in, true); }) == ErrorCode::MalformedInput);
  }
}

TEST_CASE("scores round trip") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 2 + rng() % 200;
    std::uniform_real_distribution<double> d(0.0, std::log(static_cast<double>(k)));
    const std::size_t n = 1 + rng() % 50;
    std::vector<std::string> ids;
    std::vector<double> v;
    std::vector<Truth> truth;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("id" + std::to_string(i));
      v.push_back(d(rng));
      truth.push_back(static_cast<Truth>(rng() % 3));
    }
    const auto s = make_score_set(ids, v, k);
    std::ostringstream out;
    io::write_scores(out, s, trial % 2 ? &truth : nullptr);
    std::istringstream in(out.str());
    const auto back = io::read_scores(in);
    CHECK(back.scores.k == k);
    CHECK(back.scores.scores == v);
    CHECK(back.scores.sample_ids == ids);
    if (trial % 2) {
      CHECK(back.truth == truth);
    } else {
      CHECK(back.truth.empty());
    }
  }
}

TEST_CASE("read_scores needs k") {
  std::istringstream in("sample_id,entropy\na,0.5\n");
  CHECK(code_of([&] { io::read_scores(in); }) == ErrorCode::MalformedInput);
  std::istringstream in2("sample_id,entropy\na,0.5\n");
  CHECK(io::read_scores(in2, 10).scores.k == 10);
  std::istringstream too_high("# k=2\nsample_id,entropy\na,0.9\n");
  CHECK(code_of([&] { io::read_scores(too_high); }) == ErrorCode::ScoreOutOfSupport);
}

TEST_CASE("read_series") {
  std::istringstream in("series,r,accuracy\nb,0.0,0.5\na,0.0,0.6\nb,0.5,0.4\na,0.5,0.7\n");
  const auto s = io::read_series(in);
  REQUIRE(s.size() == 2);
  CHECK(s[0].name() == "b");
  CHECK(s[1].name() == "a");
  CHECK(s[1].points()[1].accuracy == 0.7);

  std::istringstream bad_header("name,r,acc\nb,0,0.5\n");
  CHECK(code_of([&] { io::read_series(bad_header); }) == ErrorCode::MalformedInput);
  std::istringstream unsorted("series,r,accuracy\nb,0.5,0.5\nb,0.2,0.5\n");
  CHECK(code_of([&] { io::read_series(unsorted); }) == ErrorCode::NonIncreasingAbscissa);
  std::istringstream single("series,r,accuracy\nb,0.5,0.5\n");
  CHECK(code_of([&] { io::read_series(single); }) == ErrorCode::DegenerateAbscissa);
  std::istringstream text("series,r,accuracy\nb,x,0.5\n");
  CHECK(message_of([&] { io::read_series(text); }).find("line 2") != std::string::npos);
}

TEST_CASE("config overlay") {
  io::RunConfig cfg;
  io::apply_config_json(cfg, nlohmann::json::parse(
                                 R"({"grid_points": 2048, "bandwidth": 0.1, "scenario": {"n": 50}})"));
  CHECK(cfg.grid_points == 2048);
  CHECK(cfg.bandwidth == 0.1);
  CHECK(cfg.scenario.n == 50);
  CHECK(cfg.scenario.k == 100);

  io::apply_config_json(cfg, nlohmann::json::parse(R"({"bandwidth": null})"));
  CHECK_FALSE(cfg.bandwidth.has_value());
  CHECK(cfg.grid_points == 2048);

  CHECK(code_of([&] { io::apply_config_json(cfg, nlohmann::json::parse(R"({"gridpoints": 5})")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] {
          io::apply_config_json(cfg, nlohmann::json::parse(R"({"scenario": {"shape": 1}})"));
        }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] {
          io::apply_config_json(cfg, nlohmann::json::parse(R"({"log_base": "bits"})"));
        }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] {
          io::apply_config_json(cfg, nlohmann::json::parse(R"({"grid_points": "many"})"));
        }) == ErrorCode::InvalidConfig);

  io::RunConfig small;
  small.grid_points = 10;
  CHECK(code_of([&] { small.validate(); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("load_config_file layers over a base") {
  const auto dir = fs::temp_directory_path() / "usecurate_io_test";
  fs::create_directories(dir);
  const auto a = dir / "a.json";
  const auto b = dir / "b.json";
  io::write_file_atomic(a, R"({"grid_points": 512, "seed": 7})");
  io::write_file_atomic(b, R"({"seed": 9})");
  const auto cfg = io::load_config_file(b, io::load_config_file(a));
  CHECK(cfg.grid_points == 512);
  CHECK(cfg.seed == 9u);
  CHECK(code_of([&] { io::load_config_file(dir / "missing.json"); }) == ErrorCode::IoFailure);
  io::write_file_atomic(a, "{not json");
  CHECK(code_of([&] { io::load_config_file(a); }) == ErrorCode::InvalidConfig);
  CHECK_FALSE(fs::exists(dir / "a.json.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("report JSON carries the threshold back") {
  MixtureSpec spec;
  spec.n = 2000;
  const auto res = run_scenario(spec);
  io::PipelineReport r;
  r.command = "threshold";
  r.n = spec.n;
  r.k = spec.k;
  r.bandwidth = res.estimate.bandwidth;
  r.bandwidth_source = "silverman";
  r.raw_mass = res.estimate.raw_mass;
  r.threshold = res.threshold;
  r.kept = res.mask.kept_count;
  r.discarded = res.mask.discarded_count;
  const auto j = io::report_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["log_base"] == "nats");
  CHECK_FALSE(j.contains("density"));
  CHECK_FALSE(j.contains("timing_ms"));

  const auto back = io::threshold_from_report(nlohmann::json::parse(j.dump()));
  CHECK(back.threshold.u_star == res.threshold.u_star);
  CHECK(back.threshold.k == spec.k);
  CHECK(back.n == spec.n);
  CHECK(back.threshold.fallback == res.threshold.fallback);

  CHECK(code_of([] { io::threshold_from_report(nlohmann::json::parse(R"({"k": 3})")); }) ==
        ErrorCode::MissingThreshold);

  r.density = &res.estimate;
  const auto with_density = io::report_json(r);
  CHECK(with_density["density"]["u"].size() == res.estimate.grid.points());
}

TEST_CASE("metrics CSV layout") {
  std::istringstream in("series,r,accuracy\na,0.0,0.7\na,0.5,0.6\n");
  const auto s = io::read_series(in);
  std::vector<RobustnessReport> reps{robustness_report(s[0])};
  std::ostringstream out;
  io::write_metrics_csv(out, s, reps);
  CHECK(out.str() ==
        "series,avg,rslope,gm,bad,wad,p_ad\na,0.6500,-0.2000,0.1000,-0.2000,-0.2000,0.0000\n");
  const auto j = io::metrics_json(s, reps);
  CHECK(j["series"][0]["series"] == "a");
}
