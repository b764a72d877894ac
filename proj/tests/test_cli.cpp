#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "majorant/setgen.hpp"
#include "majorant/setio.hpp"

using namespace majorant;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "majorantlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("majorantlab-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count_data_lines(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++n;
  return n;
}

}  // namespace

TEST_CASE("gen writes set files") {
  auto r = run({"gen", "--model", "ap", "--n", "100", "--b", "3", "--a", "7", "--len", "14"});
  CHECK(r.code == 0);
  CHECK(count_data_lines(r.out) == 14);
  CHECK(r.out.size() >= 3);
  CHECK(r.out.substr(r.out.size() - 3) == "94\n");

  r = run({"gen", "--model", "squares", "--n", "100"});
  CHECK(r.code == 0);
  CHECK(count_data_lines(r.out) == 10);

  r = run({"--seed", "7", "gen", "--model", "bernoulli", "--n", "1000", "--tau", "0.1"});
  CHECK(r.code == 0);
  const auto lines = count_data_lines(r.out);
  CHECK(lines >= 70);
  CHECK(lines <= 130);

  r = run({"gen", "--model", "perturbed-ap", "--n", "100", "--a", "3", "--s", "2"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("norm of small sets") {
  TempDir dir;
  {
    std::ofstream f(dir.file("three.txt"));
    f << "# N=3\n1\n2\n3\n";
    std::ofstream g(dir.file("five.txt"));
    g << "5\n";
    std::ofstream h(dir.file("bad.txt"));
    h << "# N=10\n1\nx\n";
  }
  auto r = run({"norm", "--set", dir.file("three.txt"), "--p", "4"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("norm").get<double>() == doctest::Approx(std::pow(19.0, 0.25)).epsilon(1e-14));
  CHECK(j.at("method") == "exact");
  CHECK(r.err.find("method: exact") != std::string::npos);

  r = run({"norm", "--set", dir.file("five.txt"), "--p", "3.7"});
  CHECK(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j.at("norm").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.at("method") == "quadrature");

  r = run({"norm", "--set", dir.file("three.txt"), "--p", "0.5"});
  CHECK(r.code == 2);

  r = run({"norm", "--set", dir.file("bad.txt"), "--p", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  r = run({"norm", "--set", dir.file("missing.txt"), "--p", "3"});
  CHECK(r.code == 2);
}

TEST_CASE("gen and norm round trip bit-exactly") {
  TempDir dir;
  const auto path = dir.file("set.txt");
  auto r = run({"--seed", "11:2", "--out", path, "gen", "--model", "bernoulli", "--n", "2000", "--delta", "0.4"});
  REQUIRE(r.code == 0);
  const auto file = read_set_file(path);
  const auto in_memory = generate(RandomSetModel::bernoulli_delta(2000, 0.4), Seed{11, 2});
  CHECK(file.set == in_memory);

  for (const char* p : {"3", "4", "5.5"}) {
    const auto from_file = run({"norm", "--set", path, "--p", p});
    const auto from_model = run({"--seed", "11:2", "norm", "--model", "bernoulli", "--n", "2000", "--delta", "0.4", "--p", p});
    REQUIRE(from_file.code == 0);
    REQUIRE(from_model.code == 0);
    const double direct =
        evaluate_norm(CoefficientSeq::ones(in_memory), std::stod(p), GridSpec::for_ambient(2000)).value;
    CHECK(nlohmann::json::parse(from_file.out).at("norm").get<double>() == direct);
    CHECK(nlohmann::json::parse(from_model.out).at("norm").get<double>() == direct);
  }
}

TEST_CASE("config echo re-runs to identical output") {
  TempDir dir;
  const std::vector<std::string> args{"--seed", "5", "--format", "csv", "scaling", "--model", "bernoulli",
                                      "--p", "4", "--delta", "0.25", "--sizes", "64,128,256", "--trials", "8",
                                      "--min-fit-size", "64", "--tolerance", "1"};
  const auto first = run(args);
  CHECK(first.code == 0);

  std::ostringstream config;
  std::istringstream in(first.out);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("# ", 0) == 0) config << line.substr(2) << '\n';
  const auto cfg = dir.file("echo.ini");
  std::ofstream(cfg) << config.str();

  const auto again = run({"--config", cfg, "scaling"});
  CHECK(again.code == 0);
  CHECK(again.out == first.out);

  // Flags override the file.
  const auto other = run({"--config", cfg, "scaling", "--trials", "9"});
  CHECK(other.out != first.out);
  CHECK(other.out.find("scaling.trials=9") != std::string::npos);
}

TEST_CASE("JSON config echo re-runs a norm") {
  TempDir dir;
  const auto first = run({"--seed", "3", "norm", "--model", "doubling", "--n", "500", "--k", "2", "--p", "3"});
  REQUIRE(first.code == 0);
  const auto cfg = dir.file("norm.ini");
  std::ofstream(cfg) << nlohmann::json::parse(first.out).at("config_file").get<std::string>();
  const auto again = run({"--config", cfg, "norm"});
  CHECK(again.code == 0);
  CHECK(again.out == first.out);
}

TEST_CASE("thread count does not change reports") {
  const std::vector<std::string> tail{"scaling", "--p", "3", "--delta", "0.3", "--sizes", "64,128",
                                      "--trials", "8", "--min-fit-size", "64", "--tolerance", "5"};
  auto a_args = std::vector<std::string>{"--threads", "1"};
  auto b_args = std::vector<std::string>{"--threads", "3"};
  a_args.insert(a_args.end(), tail.begin(), tail.end());
  b_args.insert(b_args.end(), tail.begin(), tail.end());
  auto a = nlohmann::json::parse(run(a_args).out);
  auto b = nlohmann::json::parse(run(b_args).out);
  a.erase("config_file");
  b.erase("config_file");
  CHECK(a == b);
}

TEST_CASE("extremal, probcheck and entropy exit codes") {
  TempDir dir;
  const auto path = dir.file("sq.txt");
  REQUIRE(run({"--out", path, "gen", "--model", "squares", "--n", "400"}).code == 0);
  auto r = run({"extremal", "--set", path, "--p", "4", "--restarts", "3"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("ratio").get<double>() == doctest::Approx(1.0).epsilon(1e-8));

  r = run({"probcheck", "--check", "mgf", "--tau", "0.01"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"fails\": true") != std::string::npos);

  r = run({"probcheck", "--check", "moment", "--n", "50", "--q", "6"});
  CHECK(r.code == 0);

  r = run({"entropy", "--check", "levy", "--norm", "l1", "--n", "10", "--samples", "4000"});
  CHECK(r.code == 0);

  r = run({"entropy", "--check", "volume", "--norm", "l1", "--n", "2", "--t", "0.5", "--points", "500"});
  CHECK(r.code == 0);

  // A scaling run whose slope misses the prediction is an invariant failure.
  r = run({"scaling", "--p", "3", "--delta", "0.4", "--sizes", "64,128", "--trials", "8", "--min-fit-size", "64",
           "--tolerance", "0.001"});
  CHECK(r.code == 1);

  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"norm"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reports written to an output prefix") {
  TempDir dir;
  const auto prefix = dir.file("rep");
  const auto r = run({"--format", "both", "--out", prefix, "scaling", "--p", "4", "--delta", "0.25", "--sizes",
                      "64,128", "--trials", "8", "--min-fit-size", "64", "--tolerance", "1"});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(prefix + ".csv"));
  REQUIRE(fs::exists(prefix + ".json"));
  CHECK(slurp(prefix + ".csv").find("size,stat_mean,stat_std,trials,excluded") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(prefix + ".json"));
  CHECK(j.contains("fitted_slope"));
  CHECK(j.contains("config"));

  // The JSON config block replays the experiment.
  const auto cfg = dir.file("replay.json");
  std::ofstream(cfg) << j.at("config").dump();
  const auto replay = run({"--format", "json", "scaling", "--replay", cfg});
  CHECK(replay.code != 2);  // the default tolerance applies, so the tiny sweep may miss it
  CHECK(nlohmann::json::parse(replay.out).at("fitted_slope") == j.at("fitted_slope"));
}
