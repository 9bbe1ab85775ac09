#include "kptau/linalg.hpp"

#include <cmath>
#include <limits>

namespace kptau {

Determinant determinant(const Matrix& m) {
  Determinant d;
  const auto n = m.rows();
  if (n == 0) return {1.0, 1.0};
  if (n == 1) return {m(0, 0), m(0, 0) == 0.0 ? std::numeric_limits<double>::infinity() : 1.0};
  Eigen::PartialPivLU<Matrix> lu(m);
  d.value = lu.determinant();
  // PartialPivLU assumes invertibility; a zero pivot gives det 0 exactly.
  const double rcond = d.value == 0.0 ? 0.0 : lu.rcond();
  d.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace kptau
