#pragma once

#include <Eigen/Dense>

namespace kptau {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Determinant from a partially pivoted LU factorization, with the LU
/// reciprocal-condition estimate attached.
struct Determinant {
  double value = 0.0;
  double condition = 1.0;  // estimated 1-norm condition number
  bool ill_conditioned() const { return condition > kIllConditioned; }

  static constexpr double kIllConditioned = 1e12;
};

Determinant determinant(const Matrix& m);

inline double det(const Matrix& m) { return determinant(m).value; }

}  // namespace kptau
