#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "kptau/partition.hpp"

namespace kptau {

/// Truncated flow parameters (t_1, ..., t_K). Degrees above K read as zero.
///
/// Power sums are never stored: with this normalization p_i = i * t_i, so
/// the Miwa image of a matrix A has t_i = tr(A^i) / i.
class FlowVector {
 public:
  FlowVector() : t_(1, 0.0) {}
  explicit FlowVector(std::vector<double> entries);
  FlowVector(std::initializer_list<double> entries)
      : FlowVector(std::vector<double>(entries)) {}

  int order() const { return static_cast<int>(t_.size()); }
  /// t_i with 1-based i; zero for i > K.
  double operator()(int i) const {
    return (i >= 1 && i <= order()) ? t_[static_cast<std::size_t>(i - 1)] : 0.0;
  }
  std::span<const double> entries() const { return t_; }

  /// t_i -> c^i t_i.
  FlowVector scaled(double c) const;
  /// Entry-wise difference, truncated at the larger of the two orders.
  FlowVector operator-(const FlowVector& other) const;

 private:
  std::vector<double> t_;
};

/// Eigenvalues (a_1, ..., a_N) of a diagonalized Hermitian matrix.
class EigenList {
 public:
  explicit EigenList(std::vector<double> values);
  EigenList(std::initializer_list<double> values)
      : EigenList(std::vector<double>(values)) {}

  int size() const { return static_cast<int>(a_.size()); }
  double operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return a_; }

  /// True when every pair differs by at least rel_gap * max|a|.
  bool distinct(double rel_gap = kDegeneracyGap) const;

  static constexpr double kDegeneracyGap = 1e-8;

 private:
  std::vector<double> a_;
};

/// h_0 .. h_max_deg from i h_i = sum_{k=1..i} k t_k h_{i-k}.
std::vector<double> complete_h(const FlowVector& t, int max_deg);

/// Jacobi-Trudi determinant det(h_{lambda_i - i + j}).
double schur_jt(const Partition& lambda, const FlowVector& t);

/// Reuses one table of complete symmetric functions for many partitions.
class SchurJT {
 public:
  explicit SchurJT(FlowVector t, int max_weight = 0);
  double operator()(const Partition& lambda);
  const FlowVector& flow() const { return t_; }

 private:
  void ensure_degree(int deg);
  FlowVector t_;
  std::vector<double> h_;
};

/// Miwa image [A]: t_i = (1/i) sum_k a_k^i for i = 1..order.
FlowVector miwa(const EigenList& a, int order);

/// prod_{i<j} (a_i - a_j).
double vandermonde(const EigenList& a);

/// Character formula det(a_i^{lambda_j - j + N}) / Vandermonde(a).
/// Returns 0 when length(lambda) > N; throws DegeneracyError when two
/// eigenvalues are closer than 1e-8 max|a| (use schur_jt on miwa(a) then).
double schur_char(const Partition& lambda, const EigenList& a);

/// s_lambda([A]) by the character formula when the spectrum is distinct and
/// by Jacobi-Trudi on the Miwa vector otherwise.
double schur_eigen(const Partition& lambda, const EigenList& a);

/// Sum over |lambda| <= cutoff of s_lambda(t) s_lambda(u), in graded order.
double cauchy_littlewood_lhs(const FlowVector& t, const FlowVector& u,
                             int cutoff);

/// exp(sum_i i t_i u_i), the closed form the sum above truncates.
double cauchy_littlewood_rhs(const FlowVector& t, const FlowVector& u);

}  // namespace kptau
