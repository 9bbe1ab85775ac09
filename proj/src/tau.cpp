#include "kptau/tau.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "kptau/error.hpp"

namespace kptau {

namespace {

constexpr double kConvergedRatio = 1e-6;

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string(what) + " JSON: " + e.what());
  }
}

nlohmann::json parts_json(const Partition& p) {
  return nlohmann::json(std::vector<int>(p.parts().begin(), p.parts().end()));
}

Partition partition_from_json(const nlohmann::json& j) {
  // Arrays [2, 1] or the text form "2,1" / "()".
  if (j.is_string()) return Partition::parse(j.get<std::string>());
  if (!j.is_array()) throw InvalidArgument("partition must be a JSON array or string");
  return Partition(j.get<std::vector<int>>());
}

void check_header(const nlohmann::json& j, const char* what) {
  if (!j.is_object() || !j.contains("charge") || !j.contains("cutoff") ||
      !j.contains("coeffs") || !j["coeffs"].is_array())
    throw InvalidArgument(std::string(what) +
                          " JSON needs \"charge\", \"cutoff\" and a \"coeffs\" array");
}

void check_partition(const Partition& p, int charge, int cutoff, Provenance prov) {
  if (p.weight() > cutoff)
    throw WindowError("partition " + p.to_string() + " exceeds cutoff " +
                      std::to_string(cutoff));
  if (prov != Provenance::manual && p.length() > charge)
    throw WindowError("partition " + p.to_string() + " longer than charge " +
                      std::to_string(charge));
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::frame:
      return "frame";
    case Provenance::moments:
      return "moments";
    case Provenance::manual:
      return "manual";
  }
  return "manual";
}

Provenance parse_provenance(const std::string& text) {
  if (text == "frame") return Provenance::frame;
  if (text == "moments") return Provenance::moments;
  if (text == "manual") return Provenance::manual;
  throw InvalidArgument("unknown provenance '" + text + "'");
}

TauSeries::TauSeries(int charge, int cutoff, Provenance provenance)
    : charge_(charge), cutoff_(cutoff), provenance_(provenance) {
  if (cutoff_ < 0) throw InvalidArgument("cutoff must be >= 0");
}

void TauSeries::set(const Partition& lambda, double value) {
  check_partition(lambda, charge_, cutoff_, provenance_);
  if (!std::isfinite(value)) throw InvalidArgument("tau coefficient must be finite");
  if (std::abs(value) < kPruneBelow)
    coeffs_.erase(lambda);
  else
    coeffs_[lambda] = value;
}

double TauSeries::coeff(const Partition& lambda) const {
  auto it = coeffs_.find(lambda);
  return it == coeffs_.end() ? 0.0 : it->second;
}

TauSeries TauSeries::from_frame(const FiniteFrame& w, int cutoff) {
  TauSeries tau(w.charge(), cutoff, Provenance::frame);
  for (const auto& [lambda, value] : coeffs_from_frame(w, cutoff)) tau.set(lambda, value);
  return tau;
}

std::string TauSeries::to_json() const {
  nlohmann::json j;
  j["charge"] = charge_;
  j["cutoff"] = cutoff_;
  j["provenance"] = to_string(provenance_);
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [lambda, value] : coeffs_)
    j["coeffs"].push_back({{"lambda", parts_json(lambda)}, {"value", value}});
  return j.dump(2);
}

TauSeries TauSeries::from_json(const std::string& text) {
  const auto j = parse_json(text, "tau series");
  check_header(j, "tau series");
  const Provenance prov =
      j.contains("provenance") ? parse_provenance(j["provenance"].get<std::string>())
                               : Provenance::manual;
  TauSeries tau(j["charge"].get<int>(), j["cutoff"].get<int>(), prov);
  for (const auto& entry : j["coeffs"]) {
    if (!entry.contains("lambda") || !entry.contains("value"))
      throw InvalidArgument("tau series JSON: entries need \"lambda\" and \"value\"");
    tau.set(partition_from_json(entry["lambda"]), entry["value"].get<double>());
  }
  return tau;
}

TauSeries2::TauSeries2(int charge, int cutoff, Provenance provenance)
    : charge_(charge), cutoff_(cutoff), provenance_(provenance) {
  if (cutoff_ < 0) throw InvalidArgument("cutoff must be >= 0");
}

void TauSeries2::set(const Partition& lambda, const Partition& mu, double value) {
  check_partition(lambda, charge_, cutoff_, provenance_);
  check_partition(mu, charge_, cutoff_, provenance_);
  if (!std::isfinite(value)) throw InvalidArgument("tau coefficient must be finite");
  PartitionPair key{lambda, mu};
  if (std::abs(value) < kPruneBelow)
    coeffs_.erase(key);
  else
    coeffs_[std::move(key)] = value;
}

double TauSeries2::coeff(const Partition& lambda, const Partition& mu) const {
  auto it = coeffs_.find(PartitionPair{lambda, mu});
  return it == coeffs_.end() ? 0.0 : it->second;
}

std::string TauSeries2::to_json() const {
  nlohmann::json j;
  j["charge"] = charge_;
  j["cutoff"] = cutoff_;
  j["provenance"] = to_string(provenance_);
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [key, value] : coeffs_)
    j["coeffs"].push_back({{"lambda", parts_json(key.first)},
                           {"mu", parts_json(key.second)},
                           {"value", value}});
  return j.dump(2);
}

TauSeries2 TauSeries2::from_json(const std::string& text) {
  const auto j = parse_json(text, "tau2 series");
  check_header(j, "tau2 series");
  const Provenance prov =
      j.contains("provenance") ? parse_provenance(j["provenance"].get<std::string>())
                               : Provenance::manual;
  TauSeries2 tau(j["charge"].get<int>(), j["cutoff"].get<int>(), prov);
  for (const auto& entry : j["coeffs"]) {
    if (!entry.contains("lambda") || !entry.contains("mu") || !entry.contains("value"))
      throw InvalidArgument("tau2 series JSON: entries need \"lambda\", \"mu\", \"value\"");
    tau.set(partition_from_json(entry["lambda"]), partition_from_json(entry["mu"]),
            entry["value"].get<double>());
  }
  return tau;
}

SeriesValue eval_kp(const TauSeries& tau, const FlowVector& t) {
  SchurJT s(t, tau.cutoff());
  int top = 0;
  for (const auto& [lambda, value] : tau.coeffs()) top = std::max(top, lambda.weight());
  SeriesValue out;
  double top_sum = 0.0;
  for (const auto& [lambda, value] : tau.coeffs()) {
    const double term = value * s(lambda);
    out.value += term;
    if (lambda.weight() == top) top_sum += term;
  }
  out.top_stratum = std::abs(top_sum);
  return out;
}

SeriesValue eval_2kp(const TauSeries2& tau, const FlowVector& t, const FlowVector& u) {
  SchurJT st(t, tau.cutoff());
  SchurJT su(u, tau.cutoff());
  int top = 0;
  for (const auto& [key, value] : tau.coeffs())
    top = std::max(top, key.first.weight() + key.second.weight());
  SeriesValue out;
  double top_sum = 0.0;
  for (const auto& [key, value] : tau.coeffs()) {
    const double term = value * st(key.first) * su(key.second);
    out.value += term;
    if (key.first.weight() + key.second.weight() == top) top_sum += term;
  }
  out.top_stratum = std::abs(top_sum);
  return out;
}

TauSeries apply_conv(const RhoSequence& rho, const TauSeries& tau) {
  TauSeries out(tau.charge(), tau.cutoff(), tau.provenance());
  for (const auto& [lambda, value] : tau.coeffs())
    out.set(lambda, r_lambda(rho, lambda, tau.charge()) * value);
  return out;
}

TauSeries2 apply_conv2(const RhoSequence& rho, const RhoSequence& rho_t,
                       const TauSeries2& tau) {
  TauSeries2 out(tau.charge(), tau.cutoff(), tau.provenance());
  const int n = tau.charge();
  for (const auto& [key, value] : tau.coeffs())
    out.set(key.first, key.second,
            r_lambda(rho, key.first, n) * value * r_lambda(rho_t, key.second, n));
  return out;
}

HypergeomSeries tau_hypergeom_series(const RhoSequence& rho, int n,
                                     const EigenList& a, const EigenList& b,
                                     int cutoff) {
  if (n < 1) throw InvalidArgument("charge N must be >= 1");
  if (a.size() != n || b.size() != n)
    throw InvalidArgument("eigenvalue lists must have N entries");
  HypergeomSeries out;
  double stratum = 0.0;
  for (const auto& lambda : enumerate_partitions(cutoff, n)) {
    const double term = r_lambda(rho, lambda, n) * schur_eigen(lambda, a) * schur_eigen(lambda, b);
    out.value += term;
    if (lambda.weight() == cutoff) stratum += term;
  }
  out.last_stratum = std::abs(stratum);
  out.converged = out.last_stratum <= kConvergedRatio * std::abs(out.value);
  return out;
}

Determinant tau_hypergeom_det(const RhoSequence& rho, int n, const EigenList& a,
                              const EigenList& b) {
  if (n < 1) throw InvalidArgument("charge N must be >= 1");
  if (a.size() != n || b.size() != n)
    throw InvalidArgument("eigenvalue lists must have N entries");
  if (!a.distinct() || !b.distinct())
    throw DegeneracyError(
        "determinant form needs distinct eigenvalues; use the series route");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rho_plus_eval(rho, a[i] * b[j]).value;
  Determinant d = determinant(m);
  d.value /= vandermonde(a) * vandermonde(b);
  return d;
}

std::string to_string(MiwaShift c) {
  return c == MiwaShift::standard ? "standard" : "paper-literal";
}

MiwaShift parse_miwa_shift(const std::string& text) {
  if (text == "standard") return MiwaShift::standard;
  if (text == "paper-literal" || text == "literal") return MiwaShift::paper_literal;
  throw InvalidArgument("unknown Miwa shift convention '" + text + "'");
}

FlowVector miwa_shift(double z, int order, MiwaShift convention) {
  if (z == 0.0) throw DomainError("Miwa shift needs z != 0");
  std::vector<double> s(static_cast<std::size_t>(std::max(order, 1)));
  double inv = 1.0;
  for (int i = 1; i <= static_cast<int>(s.size()); ++i) {
    inv /= z;
    s[i - 1] = convention == MiwaShift::standard ? inv / i : i * inv;
  }
  return FlowVector(std::move(s));
}

double baker_akhiezer(const TauSeries& tau, double z, const FlowVector& t,
                      MiwaShift convention) {
  if (!(std::abs(z) > 1.0)) throw DomainError("Baker-Akhiezer evaluation needs |z| > 1");
  const int order = std::max(t.order(), tau.cutoff());
  const FlowVector shifted = t - miwa_shift(z, order, convention);
  const double denom = eval_kp(tau, t).value;
  if (denom == 0.0 || !std::isfinite(denom))
    throw DomainError("tau(N, t) vanishes; Baker-Akhiezer ratio undefined");
  double exponent = 0.0;
  double zi = 1.0;
  for (int i = 1; i <= t.order(); ++i) {
    zi *= z;
    exponent += t(i) * zi;
  }
  return std::exp(exponent) * eval_kp(tau, shifted).value / denom;
}

}  // namespace kptau
