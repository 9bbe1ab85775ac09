#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  std::vector<nlohmann::json> lines() const {
    std::vector<nlohmann::json> v;
    std::istringstream s(out);
    std::string line;
    while (std::getline(s, line)) v.push_back(nlohmann::json::parse(line));
    return v;
  }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kptau");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = kptau::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "kptau_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("schur command") {
  auto r = run({"schur", "--lambda", "1", "--t", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0)["value"] == 0.5);
  r = run({"schur", "--lambda", "2,1", "--eigs", "2,1"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0)["value"].get<double>() == doctest::Approx(6.0));
  CHECK(r.lines().at(0)["jt"].get<double>() == doctest::Approx(6.0));
  r = run({"schur", "--lambda", "2,1", "--t", "1,0,0"});
  CHECK(r.lines().at(0)["value"].get<double>() == doctest::Approx(1.0 / 3));
  r = run({"schur", "--lambda", "1,2", "--t", "1"});
  CHECK(r.code != 0);
  CHECK(!r.err.empty());
  CHECK(run({"schur", "--lambda", "1", "--t", "abc"}).code != 0);
  CHECK(run({"schur", "--lambda", "1"}).code != 0);
}

TEST_CASE("tau commands") {
  auto r = run({"tau", "hypergeom", "--rho", "exp", "--N", "2", "--a", "1,0.5", "--b", "0.3,0.1",
                "--method", "both"});
  CHECK(r.code == 0);
  const auto j = r.lines().at(0);
  CHECK(j.contains("series"));
  CHECK(j.contains("det"));
  CHECK(j["rel_dev"].get<double>() < 1e-7);
  CHECK(run({"tau", "hypergeom", "--rho", "binomial:a=2,zeta=0.5,q=1", "--N", "1", "--a", "0.1",
             "--b", "0.1"})
            .code == 2);
  CHECK(run({"tau", "hypergeom", "--N", "2", "--a", "1", "--b", "0.3,0.1"}).code == 2);

  const auto in = scratch("tau.json"), out = scratch("tau2.json");
  write(in, R"j({"charge": 1, "cutoff": 4, "provenance": "manual",
               "coeffs": [{"lambda": "()", "value": 1}, {"lambda": "1", "value": 1}]})j");
  std::filesystem::remove(out);
  r = run({"tau", "convolve", "--rho", "exp", "--in", in.string(), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(out));
  r = run({"tau", "baker", "--in", in.string(), "--z", "2", "--convention", "standard"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0)["value"].get<double>() == doctest::Approx(0.5));
  r = run({"tau", "baker", "--in", in.string(), "--z", "0.5"});
  CHECK(r.code == 3);
  CHECK(run({"tau", "baker", "--in", scratch("missing.json").string(), "--z", "2"}).code == 2);
}

TEST_CASE("custom rho from file") {
  const auto rho = scratch("rho.json");
  write(rho, R"({"-1": 1, "0": 1, "1": 0.5, "2": 0.25, "3": 0.125})");
  const auto r = run({"tau", "hypergeom", "--rho", "custom:file=" + rho.string(), "--N", "1",
                      "--a", "0.5", "--b", "0.5", "--cutoff", "3"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0)["series"].get<double>() ==
        doctest::Approx(1 + 0.5 * 0.25 + 0.25 * 0.0625 + 0.125 * 0.015625));
}

TEST_CASE("matmodel commands") {
  auto r = run({"matmodel", "one", "--measure", "gauss:sigma=1", "--rho", "exp", "--N", "2", "--a",
                "0.4,0.1", "--method", "both"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0)["rel_dev"].get<double>() < 1e-6);
  r = run({"matmodel", "two", "--sigma", "1", "--rho", "exp", "--rhot", "exp", "--a", "0.3", "--b",
           "0.2", "--N", "1"});
  CHECK(r.code == 0);
  CHECK(r.lines().at(0).contains("oracle"));
  r = run({"matmodel", "two", "--sigma", "0.4", "--a", "0.3", "--b", "0.2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("diverges") != std::string::npos);
  CHECK(run({"matmodel", "one", "--measure", "gauss:sigma=-1", "--a", "0.1"}).code == 2);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--suite", "plucker", "--seed", "7"});
  CHECK(r.code == 0);
  for (const auto& j : r.lines()) CHECK(j["pass"] == true);
  r = run({"verify", "--suite", "hciz", "--n", "2", "--samples", "100000", "--seed", "42"});
  CHECK(r.code == 0);
  for (const auto& j : r.lines()) CHECK(j["rel_dev"].get<double>() <= 3.0);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  // An impossible tolerance makes deterministic checks fail and the exit code follow.
  r = run({"verify", "--suite", "prop2", "--tol", "0"});
  CHECK(r.code == 1);
}

TEST_CASE("config files") {
  const auto cfg = scratch("run.json");
  write(cfg, R"({"command": "verify", "suite": "andreief", "seed": 5})");
  const auto a = run({"--config", cfg.string()});
  const auto b = run({"verify", "--suite", "andreief", "--seed", "5"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  write(cfg, R"({"command": "schur", "lambda": [2, 1], "eigs": [2, 1]})");
  const auto c = run({"--config", cfg.string()});
  CHECK(c.code == 0);
  CHECK(c.lines().at(0)["value"].get<double>() == doctest::Approx(6.0));

  write(cfg, R"({"command": "verify", "suite": "andreief", "bogus": 1})");
  CHECK(run({"--config", cfg.string()}).code == 2);
  write(cfg, R"([1, 2])");
  CHECK(run({"--config", cfg.string()}).code == 2);
}

TEST_CASE("output file and determinism") {
  const auto out = scratch("report.jsonl");
  const auto r = run({"--output", out.string(), "verify", "--suite", "semigroup", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::stringstream s;
  s << f.rdbuf();
  CHECK(s.str() == run({"verify", "--suite", "semigroup", "--seed", "3"}).out);
}
