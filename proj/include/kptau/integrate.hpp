#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kptau/linalg.hpp"

namespace kptau {

using Integrand1 = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

enum class MeasureKind { gauss, table, density };

/// One-dimensional integration measure dmu_0.
///
///   gauss(sigma)      density e^{-sigma x^2} on the real line
///   table             finite sum of point masses w_k at x_k
///   density           a callable density on [lo, hi] (either end may be
///                     infinite), integrated adaptively
class MeasureSpec {
 public:
  static MeasureSpec gauss(double sigma);
  /// Nodes strictly increasing, weights positive.
  static MeasureSpec table(std::vector<double> nodes, std::vector<double> weights);
  /// {"nodes": [...], "weights": [...]}
  static MeasureSpec table_from_json(const std::string& json_text);
  static MeasureSpec density(Integrand1 rho, double lo, double hi, std::string name);

  MeasureKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double density_at(double x) const { return (*density_)(x); }
  std::string describe() const;

 private:
  MeasureSpec() = default;
  MeasureKind kind_ = MeasureKind::gauss;
  double sigma_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::shared_ptr<const Integrand1> density_;
  std::string name_;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Default Gauss-Hermite order for gauss measures.
inline constexpr int kDefaultHermiteNodes = 80;

/// Gauss-Hermite rule for the weight e^{-x^2}: nodes ascending, weights
/// matching. Newton iteration on the orthonormal recurrence; cached per n.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const HermiteRule& hermite_rule(int n);

/// Integral of f against m. gauss: Gauss-Hermite with max(80, ceil((degree_hint
/// + 1) / 2)) nodes rescaled by 1/sqrt(sigma), symmetric pairs summed first;
/// the error estimate is the change under doubling the node count. table:
/// the weighted sum (error 0). density: adaptive Gauss-Kronrod.
QuadResult quad1d(const MeasureSpec& m, const Integrand1& f, int degree_hint = 0);

/// Integral of e^{xy} f(x, y) against m1(x) m2(y) (coupled = true), or of
/// f(x, y) alone (coupled = false). A pair of gauss measures uses a
/// Gauss-Hermite product rule whitened by the Cholesky factor of the
/// combined quadratic form; throws DivergenceError when 4 sigma1 sigma2 <= 1.
/// Other combinations integrate iteratively.
QuadResult quad2d_coupled(const MeasureSpec& m1, const MeasureSpec& m2,
                          const Integrand2& f, bool coupled = true);

/// Points (x_k, y_k) with weights w_k.
struct Rule2 {
  std::vector<double> x, y, w;
};

/// Whitened Gauss-Hermite product rule (n x n points) for the weight
/// e^{-s1 x^2 - s2 y^2 + c x y}; requires 4 s1 s2 > c^2.
Rule2 gauss_pair_rule(double s1, double s2, double c, int n);

/// Finite-grid or Gaussian coupled measure dmu(x, y) on R^2.
class CoupledMeasure {
 public:
  /// e^{-sigma1 x^2 - sigma2 y^2 + x y} dx dy.
  static CoupledMeasure gauss_pair(double sigma1, double sigma2);
  /// Point masses w(k, l) at (x_k, y_l).
  static CoupledMeasure grid(std::vector<double> xs, std::vector<double> ys, Matrix w);

  bool is_grid() const { return grid_; }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const Matrix& grid_weights() const { return w_; }
  double sigma1() const { return s1_; }
  double sigma2() const { return s2_; }

  QuadResult integrate(const Integrand2& f) const;
  /// Grid points with nonzero weight, or the whitened rule with n x n points.
  Rule2 rule(int n = kDefaultHermiteNodes) const;

 private:
  CoupledMeasure() = default;
  bool grid_ = false;
  std::vector<double> xs_, ys_;
  Matrix w_;
  double s1_ = 1.0, s2_ = 1.0;
};

/// Counter-based generator: the n-th output for key k is SplitMix64's output
/// function applied to k + n * 0x9E3779B97F4A7C15. Streams depend only on
/// (seed, stream), never on the platform or on thread scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller; pairs are consumed together).
  double normal();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

using CMatrix = Eigen::MatrixXcd;

struct HaarSample {
  CMatrix u;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

inline constexpr int kMaxHaarDimension = 8;

/// Haar unitary from the QR factorization of a complex Ginibre matrix, with
/// the phases of diag(R) moved into Q. Checks U U^dagger = I to 1e-12.
CMatrix haar_unitary(int n, CounterRng& rng);
HaarSample haar_unitary(int n, std::uint64_t seed, std::uint64_t stream = 0);

struct McResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

/// Samples per batch; batch b draws from CounterRng(seed, b).
inline constexpr long kMcBatchSize = 4096;

/// Mean and standard error of draw(rng) over n_samples >= 100 draws. Batches
/// may run on several threads; their statistics are merged in batch order,
/// so the result depends only on (draw, n_samples, seed).
McResult mc_estimate(const std::function<double(CounterRng&)>& draw,
                     long n_samples, std::uint64_t seed);

template <class Sampler, class F>
McResult mc_estimate(Sampler sampler, F f, long n_samples, std::uint64_t seed) {
  return mc_estimate(
      std::function<double(CounterRng&)>(
          [sampler, f](CounterRng& rng) { return f(sampler(rng)); }),
      n_samples, seed);
}

}  // namespace kptau
