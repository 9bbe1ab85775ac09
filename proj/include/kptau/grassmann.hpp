#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kptau/convolution.hpp"
#include "kptau/linalg.hpp"
#include "kptau/partition.hpp"

namespace kptau {

/// Finite window of a frame for W in the charge-N Grassmannian component.
///
/// Row r carries basis label r (r = 0 .. R-1); the N columns are the frame
/// vectors. Labels below 0 belong to the saturated identity tail, which
/// contributes a factor 1 to every partition minor with length(lambda) <= N.
class FiniteFrame {
 public:
  /// Throws InvalidArgument if R < N or, with check_rank, if the smallest
  /// singular value is below 1e-10 times the largest.
  FiniteFrame(Matrix rows, int charge, bool check_rank = true);

  /// Identity embedding of H_+^N: column k is e_{N-k}.
  static FiniteFrame identity(int charge, int depth);
  /// {"charge": N, "rows": {"label": [entries...]}}; missing rows are zero.
  static FiniteFrame from_json(const std::string& json_text);

  int charge() const { return charge_; }
  int depth() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  /// Determinant of the N x N submatrix on the given rows, in the given order.
  double minor(const std::vector<int>& labels) const;

  /// Every row labeled i multiplied by rho_i (the convolution action on the
  /// frame vectors' Fourier coefficients).
  FiniteFrame scaled_rows(const RhoSequence& rho) const;

 private:
  Matrix m_;
  int charge_;
};

/// Rows lambda_j - j + N for j = 1..N, in decreasing order.
std::vector<int> partition_labels(const Partition& lambda, int charge);

/// Pluecker coordinate of W along |lambda, N>.
double plucker_coord(const FiniteFrame& w, const Partition& lambda);

/// {lambda -> plucker_coord} over all lambda with |lambda| <= cutoff and
/// length <= N.
PartitionMap<double> coeffs_from_frame(const FiniteFrame& w, int cutoff);

/// Signed minor for an ordered list of N labels read off a coefficient
/// table: the sign of the sorting permutation times pi(lambda). Repeated
/// labels give 0. Partitions of weight <= cutoff missing from the table are
/// pruned zeros; heavier ones are a WindowError.
double table_minor(const PartitionMap<double>& coeffs, int charge, int cutoff,
                   const std::vector<int>& labels);

struct PluckerResidual {
  double residual = 0.0;  // alternating exchange sum
  double scale = 0.0;     // sum of |products|, for relative comparisons
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

using MinorFunction = std::function<double(const std::vector<int>&)>;

/// sum_k (-1)^k D(rows_a + {b_k}) D(rows_b minus b_k) for |rows_a| = N-1 and
/// |rows_b| = N+1.
PluckerResidual plucker_residual(const MinorFunction& minor,
                                 const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b);

PluckerResidual plucker_residual(const FiniteFrame& w,
                                 const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b);

PluckerResidual plucker_residual(const PartitionMap<double>& coeffs, int charge,
                                 int cutoff, const std::vector<int>& rows_a,
                                 const std::vector<int>& rows_b);

}  // namespace kptau
