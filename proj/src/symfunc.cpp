#include "kptau/symfunc.hpp"

#include <algorithm>
#include <cmath>

#include "kptau/error.hpp"
#include "kptau/linalg.hpp"

namespace kptau {

FlowVector::FlowVector(std::vector<double> entries) : t_(std::move(entries)) {
  if (t_.empty()) throw InvalidArgument("flow vector needs at least one entry");
  for (double v : t_)
    if (!std::isfinite(v)) throw InvalidArgument("flow vector entries must be finite");
}

FlowVector FlowVector::scaled(double c) const {
  std::vector<double> out(t_);
  double power = 1.0;
  for (double& v : out) {
    power *= c;
    v *= power;
  }
  return FlowVector(std::move(out));
}

FlowVector FlowVector::operator-(const FlowVector& other) const {
  const int k = std::max(order(), other.order());
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) out[i - 1] = (*this)(i) - other(i);
  return FlowVector(std::move(out));
}

EigenList::EigenList(std::vector<double> values) : a_(std::move(values)) {
  if (a_.empty()) throw InvalidArgument("eigenvalue list must be nonempty");
  for (double v : a_)
    if (!std::isfinite(v)) throw InvalidArgument("eigenvalues must be finite");
}

bool EigenList::distinct(double rel_gap) const {
  if (a_.size() < 2) return true;
  double scale = 0.0;
  for (double v : a_) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (std::size_t i = 0; i < a_.size(); ++i)
    for (std::size_t j = i + 1; j < a_.size(); ++j)
      if (std::abs(a_[i] - a_[j]) < rel_gap * scale) return false;
  return true;
}

std::vector<double> complete_h(const FlowVector& t, int max_deg) {
  if (max_deg < 0) throw InvalidArgument("complete_h: negative degree");
  std::vector<double> h(static_cast<std::size_t>(max_deg) + 1, 0.0);
  h[0] = 1.0;
  for (int i = 1; i <= max_deg; ++i) {
    double acc = 0.0;
    for (int k = 1; k <= std::min(i, t.order()); ++k) acc += k * t(k) * h[i - k];
    h[i] = acc / i;
  }
  return h;
}

namespace {

double jacobi_trudi(const Partition& lambda, std::span<const double> h) {
  const int l = lambda.length();
  if (l == 0) return 1.0;
  auto hk = [&](int m) { return m < 0 ? 0.0 : h[static_cast<std::size_t>(m)]; };
  if (l == 1) return hk(lambda.part(1));
  Matrix m(l, l);
  for (int i = 1; i <= l; ++i)
    for (int j = 1; j <= l; ++j) m(i - 1, j - 1) = hk(lambda.part(i) - i + j);
  return det(m);
}

}  // namespace

double schur_jt(const Partition& lambda, const FlowVector& t) {
  const int deg = lambda.part(1) + lambda.length() - 1;
  const auto h = complete_h(t, std::max(deg, 0));
  return jacobi_trudi(lambda, h);
}

SchurJT::SchurJT(FlowVector t, int max_weight) : t_(std::move(t)) {
  h_ = complete_h(t_, std::max(max_weight, 0));
}

void SchurJT::ensure_degree(int deg) {
  if (deg < static_cast<int>(h_.size())) return;
  h_ = complete_h(t_, deg);
}

double SchurJT::operator()(const Partition& lambda) {
  ensure_degree(lambda.part(1) + lambda.length() - 1);
  return jacobi_trudi(lambda, h_);
}

FlowVector miwa(const EigenList& a, int order) {
  if (order < 1) throw InvalidArgument("miwa: truncation order must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(order), 0.0);
  for (double v : a.values()) {
    double power = 1.0;
    for (int i = 1; i <= order; ++i) {
      power *= v;
      t[i - 1] += power;
    }
  }
  for (int i = 1; i <= order; ++i) t[i - 1] /= i;
  return FlowVector(std::move(t));
}

double vandermonde(const EigenList& a) {
  double prod = 1.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) prod *= a[i] - a[j];
  return prod;
}

double schur_char(const Partition& lambda, const EigenList& a) {
  const int n = a.size();
  if (lambda.length() > n) return 0.0;
  if (!a.distinct())
    throw DegeneracyError(
        "schur_char: eigenvalues are (nearly) degenerate; use the "
        "Jacobi-Trudi route on the Miwa vector instead");
  if (lambda.empty()) return 1.0;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= n; ++j)
      m(i, j - 1) = std::pow(a[i], lambda.part(j) - j + n);
  return det(m) / vandermonde(a);
}

double schur_eigen(const Partition& lambda, const EigenList& a) {
  if (lambda.length() > a.size()) return 0.0;
  if (a.distinct()) return schur_char(lambda, a);
  return schur_jt(lambda, miwa(a, std::max(lambda.weight(), 1)));
}

double cauchy_littlewood_lhs(const FlowVector& t, const FlowVector& u,
                             int cutoff) {
  SchurJT st(t, cutoff);
  SchurJT su(u, cutoff);
  double sum = 0.0;
  for (const auto& lambda : enumerate_partitions(cutoff, cutoff))
    sum += st(lambda) * su(lambda);
  return sum;
}

double cauchy_littlewood_rhs(const FlowVector& t, const FlowVector& u) {
  double e = 0.0;
  for (int i = 1; i <= std::min(t.order(), u.order()); ++i) e += i * t(i) * u(i);
  return std::exp(e);
}

}  // namespace kptau
