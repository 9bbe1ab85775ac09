#include "kptau/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "kptau/error.hpp"

namespace kptau {

namespace {

constexpr int kUnboundedLo = std::numeric_limits<int>::min() / 2;
constexpr int kUnboundedHi = std::numeric_limits<int>::max() / 2;
constexpr double kDualFormTolerance = 1e-12;

double exp_rho(int i) {
  if (i < 0) return 1.0;
  double factorial = 1.0;
  for (int k = 2; k <= i; ++k) factorial *= k;
  return 1.0 / factorial;
}

double binomial_rho(double a, double zeta, int i) {
  if (i < 0) return 1.0;
  double value = 1.0;
  for (int k = 1; k <= i; ++k) value *= zeta * (a + k - 1) / k;
  return value;
}

}  // namespace

RhoSequence RhoSequence::exp_family() {
  RhoSequence s;
  s.family_ = RhoFamily::exp;
  s.bounded_ = false;
  s.lo_ = kUnboundedLo;
  s.hi_ = kUnboundedHi;
  return s;
}

RhoSequence RhoSequence::binomial(double a, double zeta) {
  if (!(std::abs(zeta) < 1.0))
    throw DomainError("binomial family requires |zeta| < 1");
  if (!std::isfinite(a)) throw InvalidArgument("binomial family: a must be finite");
  RhoSequence s;
  s.family_ = RhoFamily::binomial;
  s.bounded_ = false;
  s.lo_ = kUnboundedLo;
  s.hi_ = kUnboundedHi;
  s.a_ = a;
  s.zeta_ = zeta;
  return s;
}

RhoSequence RhoSequence::custom(int i_min, std::vector<double> values) {
  const int i_max = i_min + static_cast<int>(values.size()) - 1;
  if (i_min > -1 || i_max < 0)
    throw WindowError("custom rho window must contain indices -1 and 0");
  for (double v : values)
    if (v == 0.0 || !std::isfinite(v))
      throw InvalidArgument("custom rho values must be finite and nonzero");
  RhoSequence s;
  s.family_ = RhoFamily::custom;
  s.lo_ = i_min;
  s.hi_ = i_max;
  auto table = std::make_shared<std::vector<double>>(std::move(values));
  s.eval_ = std::make_shared<const std::function<double(int)>>(
      [table, i_min](int i) { return (*table)[static_cast<std::size_t>(i - i_min)]; });
  return s;
}

RhoSequence RhoSequence::custom_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("rho JSON: ") + e.what());
  }
  if (!j.is_object() || j.empty())
    throw InvalidArgument("rho JSON must be a nonempty object {\"index\": value}");
  std::map<int, double> entries;
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    int index = 0;
    try {
      index = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || !value.is_number())
      throw InvalidArgument("rho JSON: bad entry '" + key + "'");
    entries[index] = value.get<double>();
  }
  const int lo = entries.begin()->first;
  const int hi = entries.rbegin()->first;
  if (static_cast<int>(entries.size()) != hi - lo + 1)
    throw WindowError("rho JSON: indices must form a contiguous window");
  std::vector<double> values;
  for (const auto& [index, value] : entries) values.push_back(value);
  return custom(lo, std::move(values));
}

RhoSequence RhoSequence::ones(int i_min, int i_max) {
  return custom(i_min, std::vector<double>(static_cast<std::size_t>(i_max - i_min + 1), 1.0));
}

std::string RhoSequence::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case RhoFamily::exp:
      return "exp";
    case RhoFamily::binomial:
      os << "binomial:a=" << a_ << ",zeta=" << zeta_;
      return os.str();
    case RhoFamily::custom:
      if (!bounded_) return "custom:product";
      os << "custom:window=[" << lo_ << "," << hi_ << "]";
      return os.str();
  }
  return "custom";
}

void RhoSequence::require(int i) const {
  if (!covers(i))
    throw WindowError("rho index " + std::to_string(i) + " outside window [" +
                      std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

double RhoSequence::rho(int i) const {
  require(i);
  double v = 0.0;
  switch (family_) {
    case RhoFamily::exp:
      v = exp_rho(i);
      break;
    case RhoFamily::binomial:
      v = binomial_rho(a_, zeta_, i);
      break;
    case RhoFamily::custom:
      v = (*eval_)(i);
      break;
  }
  if (v == 0.0)
    throw InvalidArgument("rho_" + std::to_string(i) + " vanishes for " + describe());
  return v;
}

double RhoSequence::ratio(int i) const {
  switch (family_) {
    case RhoFamily::exp:
      return i >= 1 ? 1.0 / i : 1.0;
    case RhoFamily::binomial:
      if (i >= 1) {
        const double r = zeta_ * (a_ - 1 + i) / i;
        if (r == 0.0)
          throw InvalidArgument("r_" + std::to_string(i) + " vanishes for " + describe());
        return r;
      }
      return 1.0;
    case RhoFamily::custom:
      break;
  }
  return rho(i) / rho(i - 1);
}

double RhoSequence::r_product() const {
  if (family_ != RhoFamily::custom) return 1.0;
  if (!bounded_)
    throw WindowError("R_rho of an unbounded custom sequence is not tracked");
  double prod = 1.0;
  for (int i = -1; i >= lo_; --i) prod *= rho(i);
  return prod;
}

RhoSequence rho_product(const RhoSequence& lhs, const RhoSequence& rhs) {
  RhoSequence s;
  s.family_ = RhoFamily::custom;
  s.bounded_ = lhs.bounded_ || rhs.bounded_;
  s.lo_ = std::max(lhs.lo_, rhs.lo_);
  s.hi_ = std::min(lhs.hi_, rhs.hi_);
  if (s.lo_ > s.hi_) throw WindowError("rho_product: windows do not intersect");
  s.eval_ = std::make_shared<const std::function<double(int)>>(
      [lhs, rhs](int i) { return lhs.rho(i) * rhs.rho(i); });
  return s;
}

double c_r(const RhoSequence& rho, int n) {
  double prod = 1.0;
  if (n > 0) {
    for (int i = 0; i < n; ++i) prod *= rho.rho(i);
    return prod;
  }
  for (int i = n; i <= -1; ++i) prod *= rho.rho(i);
  return 1.0 / prod;
}

double r_lambda_frobenius(const RhoSequence& rho, const Partition& lambda,
                          int n) {
  const auto f = to_frobenius(lambda);
  double value = c_r(rho, n);
  for (int k = 0; k < f.rank(); ++k)
    value *= rho.rho(n + f.alpha[k]) / rho.rho(n - f.beta[k] - 1);
  return value;
}

double r_lambda(const RhoSequence& rho, const Partition& lambda, int n) {
  double cells = c_r(rho, n);
  for (int i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda.part(i); ++j) cells *= rho.ratio(n - i + j);
  const double frob = r_lambda_frobenius(rho, lambda, n);
  if (std::abs(cells - frob) >
      kDualFormTolerance * std::max(std::abs(cells), std::abs(frob)))
    throw std::logic_error("r_lambda: cell and Frobenius forms disagree for " +
                           lambda.to_string() + " at N=" + std::to_string(n));
  return cells;
}

LaurentPoly conv_action(const RhoSequence& rho, const LaurentPoly& w) {
  LaurentPoly out;
  for (const auto& [i, wi] : w.coeffs) out.coeffs[i] = rho.rho(-i - 1) * wi;
  return out;
}

RhoPlusValue rho_plus_eval(const RhoSequence& rho, double z, int trunc) {
  switch (rho.family()) {
    case RhoFamily::exp:
      return {std::exp(z), 0.0};
    case RhoFamily::binomial: {
      const double x = rho.param_zeta() * z;
      if (!(std::abs(x) < 1.0))
        throw DomainError("rho_+ of the binomial family diverges for |zeta z| >= 1");
      return {std::pow(1.0 - x, -rho.param_a()), 0.0};
    }
    case RhoFamily::custom:
      break;
  }
  if (z == 0.0) return {rho.rho(0), 0.0};
  const int top = rho.bounded() ? std::min(trunc, rho.window_max()) : trunc;
  const bool truncated = !rho.bounded() || rho.window_max() > trunc;
  if (truncated && !(std::abs(z) < 1.0))
    throw DomainError("rho_+ of a truncated custom sequence needs |z| < 1");
  double value = 0.0;
  for (int i = top; i >= 0; --i) value = value * z + rho.rho(i);
  double estimate = 0.0;
  if (truncated) estimate = std::abs(rho.rho(top + 1) * std::pow(z, top + 1));
  return {value, estimate};
}

}  // namespace kptau
