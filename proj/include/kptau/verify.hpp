#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kptau {

/// One measured quantity against its oracle.
///
/// For Monte Carlo reports `rel_dev` holds |z|, the deviation in standard
/// errors. A report with no tolerance is informational and always passes.
struct Report {
  std::string quantity;
  std::string method;
  double value = 0.0;
  double oracle = 0.0;
  double rel_dev = 0.0;
  std::optional<double> tolerance;
  bool pass = true;

  /// {"quantity", "method", "value", "oracle", "rel_dev", "tolerance", "pass"}
  /// on a single line; non-finite numbers and a missing tolerance become null.
  std::string to_json() const;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  int n = 2;                    // matrix size for the Haar suites
  long samples = 100000;        // Monte Carlo sample count
  std::optional<double> tol;    // replaces every deterministic tolerance
};

/// Suite names in the order `all` runs them.
const std::vector<std::string>& suite_names();

/// Runs one suite (or "all"). Throws InvalidArgument for an unknown name.
std::vector<Report> run_suite(const std::string& name, const VerifyOptions& opts);

bool all_pass(const std::vector<Report>& reports);

}  // namespace kptau
