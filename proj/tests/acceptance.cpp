// Acceptance run: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kptau/verify.hpp"

using kptau::Report;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::string suite;
  std::vector<int> reports;  // indices into the suite output; empty = all
  double time_limit;         // seconds, 0 = none
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const kptau::VerifyOptions opts;  // seed 42, N = 2, 1e5 samples
  const std::vector<Criterion> criteria = {
      {1, "Schur two-route agreement", "schur-two-route", {}, 5},
      {2, "Cauchy-Littlewood truncation", "cauchy-littlewood", {0}, 1},
      {3, "exp-family closed form", "example1-closedform", {0}, 0},
      {4, "hypergeometric series vs determinant", "dethypergeom", {}, 30},
      {5, "Plucker residuals before and after convolution", "plucker", {}, 0},
      {6, "convolution semigroup", "semigroup", {}, 0},
      {7, "one-matrix series vs eigenvalue quadrature", "prop2", {0}, 60},
      {8, "one-matrix determinant vs series", "prop3", {}, 0},
      {9, "HCIZ and character integral, Monte Carlo", "hciz", {}, 60},
      {10, "Andreief identity", "andreief", {}, 0},
      {11, "two-matrix series vs determinant", "prop56", {0}, 120},
      {12, "Gaussian two-matrix closed form", "gaussian-example", {0}, 0},
      {13, "coupled-grid determinant vs direct sum", "prop78", {0}, 0},
  };

  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    const auto reports = kptau::run_suite(c.suite, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<Report> picked;
    if (c.reports.empty())
      picked = reports;
    else
      for (int i : c.reports) picked.push_back(reports.at(static_cast<std::size_t>(i)));

    bool pass = c.time_limit == 0 || secs < c.time_limit;
    std::string detail;
    for (const auto& r : picked) {
      pass = pass && r.pass;
      detail += (detail.empty() ? "" : "; ") + fmt(r.rel_dev) + " <= " + fmt(*r.tolerance);
    }
    std::string timing = fmt(secs) + " s";
    if (c.time_limit > 0) timing += " < " + fmt(c.time_limit) + " s";
    std::printf("[%s] %2d %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str(), timing.c_str());
    if (c.id == 2)
      std::printf("     box-corner tail (informational): %s\n", fmt(reports.back().rel_dev).c_str());
    if (c.id == 12)
      for (const auto& r : reports)
        if (!r.tolerance)
          std::printf("     displayed-constant deviation, %s: %s\n", r.method.c_str(),
                      fmt(r.rel_dev).c_str());
    all = all && pass;
  }

  // 14: two full runs with the same seed serialize identically.
  auto serialize = [&] {
    std::string s;
    for (const auto& r : kptau::run_suite("all", opts)) s += r.to_json() + "\n";
    return s;
  };
  const std::string first = serialize(), second = serialize();
  const bool same = first == second;
  std::printf("[%s] 14 determinism of the full report: %zu bytes, %s\n", same ? "PASS" : "FAIL",
              first.size(), same ? "byte-identical" : "differs");
  all = all && same;
  return all ? 0 : 1;
}
