#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Sandbox {
 public:
  Sandbox() {
    dir_ = fs::temp_directory_path() / ("usecurate_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& content) const {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  Run run(const std::string& args, const std::string& env = {}) const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = env + " '" USE_CURATE_BIN "' " + args + " >'" + out.string() +
                            "' 2>'" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

const char* kProbs =
    "sample_id,p1,p2,p3,p4\n"
    "a,0.25,0.25,0.25,0.25\n"
    "b,1,0,0,0\n";

}  // namespace

TEST_CASE("score writes nats with the class count") {
  Sandbox box;
  const auto in = box.file("probs.csv", kProbs);
  const auto r = box.run("score --input " + in.string());
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("# k=4 log_base=nats\nsample_id,entropy\na,1.386294", 0) == 0);
  CHECK(r.out.find("\nb,0\n") != std::string::npos);
}

TEST_CASE("score rejects a row summing to 1.2 with its line number") {
  Sandbox box;
  const auto in = box.file("probs.csv", "sample_id,p1,p2\na,0.5,0.5\nb,0.6,0.6\n");
  const auto r = box.run("score --input " + in.string());
  CHECK(r.status == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("score on a header-only file") {
  Sandbox box;
  const auto in = box.file("probs.csv", "sample_id,p1,p2\n");
  CHECK(box.run("score --input " + in.string()).status == 2);
}

TEST_CASE("missing input file is an I/O failure") {
  Sandbox box;
  CHECK(box.run("score --input " + box.path("nope.csv").string()).status == 4);
  CHECK(box.run("metrics --series " + box.path("nope.csv").string()).status == 4);
}

TEST_CASE("unknown flag is a usage error") {
  Sandbox box;
  CHECK(box.run("score --bogus").status == 2);
  CHECK(box.run("").status == 2);
  CHECK(box.run("--help").status == 0);
}

TEST_CASE("threshold on identical scores is degenerate") {
  Sandbox box;
  std::string text = "# k=10 log_base=nats\nsample_id,entropy\n";
  for (int i = 0; i < 50; ++i) text += "s" + std::to_string(i) + ",0.7\n";
  const auto scores = box.file("scores.csv", text);
  const auto r = box.run("threshold --scores " + scores.string());
  CHECK(r.status == 3);
  CHECK(r.err.find("bandwidth") != std::string::npos);
  CHECK(box.run("threshold --scores " + scores.string() + " --bandwidth 0.1").status == 0);
}

TEST_CASE("simulate, threshold and filter chain together") {
  Sandbox box;
  const auto report = box.path("sim.json");
  const auto pool = box.path("pool.csv");
  REQUIRE(box.run("simulate --output " + report.string() + " --pool-output " + pool.string())
              .status == 0);
  const auto sim = nlohmann::json::parse(slurp(report));
  CHECK(sim["threshold"]["crossing_found"] == true);
  CHECK(sim["quality"]["precision"].get<double>() > 0.95);
  CHECK(sim.contains("density"));
  CHECK_FALSE(sim.contains("timing_ms"));

  const auto thr = box.path("thr.json");
  REQUIRE(box.run("threshold --scores " + pool.string() + " --output " + thr.string()).status ==
          0);
  const auto t = nlohmann::json::parse(slurp(thr));
  CHECK(t["threshold"]["u_star"] == sim["threshold"]["u_star"]);

  SUBCASE("filter by report") {
    const auto mask = box.path("mask.csv");
    const auto r = box.run("filter --scores " + pool.string() + " --report " + thr.string() +
                           " --output " + mask.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("kept ") == 0);
    const auto text = slurp(mask);
    CHECK(text.rfind("sample_id,entropy,decision\n", 0) == 0);
    std::size_t discards = 0;
    for (std::size_t p = text.find(",discard\n"); p != std::string::npos;
         p = text.find(",discard\n", p + 1)) {
      ++discards;
    }
    CHECK(discards == t["mask"]["discarded"].get<std::size_t>());
  }
  SUBCASE("filter by explicit u*") {
    const auto r = box.run("filter --scores " + pool.string() + " --u-star 10");
    REQUIRE(r.status == 0);
    CHECK(r.out.find(",discard\n") == std::string::npos);
    CHECK(r.err.find("discarded 0") != std::string::npos);
  }
  SUBCASE("filter needs exactly one threshold source") {
    CHECK(box.run("filter --scores " + pool.string()).status == 2);
  }
  SUBCASE("report from a different pool is rejected") {
    const auto other = box.file("other.csv", "# k=100 log_base=nats\nsample_id,entropy\nx,1.0\n");
    CHECK(box.run("filter --scores " + other.string() + " --report " + thr.string()).status == 2);
  }
}

TEST_CASE("simulate output is byte-stable") {
  Sandbox box;
  const auto a = box.run("simulate");
  const auto b = box.run("simulate");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto c = box.run("simulate --seed 5");
  CHECK(c.out != a.out);
}

TEST_CASE("config precedence") {
  Sandbox box;
  const auto env_cfg = box.file("env.json", R"({"grid_points": 256, "scenario": {"n": 3000}})");
  const auto file_cfg = box.file("file.json", R"({"grid_points": 512})");
  const std::string env = "USE_CURATE_CONFIG='" + env_cfg.string() + "'";

  auto j = nlohmann::json::parse(box.run("simulate", env).out);
  CHECK(j["config"]["grid_points"] == 256);
  CHECK(j["n"] == 3000);

  j = nlohmann::json::parse(box.run("simulate --config " + file_cfg.string(), env).out);
  CHECK(j["config"]["grid_points"] == 512);
  CHECK(j["n"] == 3000);

  j = nlohmann::json::parse(
      box.run("simulate --config " + file_cfg.string() + " --grid-points 128", env).out);
  CHECK(j["config"]["grid_points"] == 128);

  const auto bad = box.file("bad.json", R"({"grid": 1})");
  CHECK(box.run("simulate --config " + bad.string()).status == 2);
}

TEST_CASE("metrics on a constant series") {
  Sandbox box;
  const auto in = box.file("series.csv",
                           "series,r,accuracy\nflat,0.0,0.7\nflat,0.2,0.7\nflat,0.4,0.7\n");
  const auto json_out = box.path("m.json");
  const auto r = box.run("metrics --series " + in.string() + " --json " + json_out.string());
  REQUIRE(r.status == 0);
  CHECK(r.out == "series,avg,rslope,gm,bad,wad,p_ad\nflat,0.7000,0.0000,0.0000,0.0000,0.0000,1.0000\n");
  const auto j = nlohmann::json::parse(slurp(json_out));
  CHECK(j["series"][0]["p_ad"] == 1.0);
}

TEST_CASE("metrics with a single point per series") {
  Sandbox box;
  const auto in = box.file("series.csv", "series,r,accuracy\nx,0.0,0.7\n");
  CHECK(box.run("metrics --series " + in.string()).status == 3);
}
