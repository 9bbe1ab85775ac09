#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kptau/partition.hpp"

namespace kptau {

enum class RhoFamily { exp, binomial, custom };

/// The convolution data {rho_i}_{i in Z}: nonvanishing Fourier multipliers
/// with ratios r_i = rho_i / rho_{i-1}.
///
/// Built-in families are defined for every index (rho_i = 1 for i <= -1, the
/// geometric choice for rho_-), so their window is nominal. Custom sequences
/// store an explicit window [i_min, i_max] with i_min <= -1 < 0 <= i_max and
/// raise WindowError outside it. All values are real and, for the built-ins,
/// positive.
class RhoSequence {
 public:
  /// rho_+(z) = e^z: rho_i = 1/i! for i >= 0.
  static RhoSequence exp_family();
  /// rho_+(z) = (1 - zeta z)^{-a}: rho_i = (a)_i zeta^i / i! for i >= 0.
  static RhoSequence binomial(double a, double zeta);
  /// Explicit values rho_{i_min}, rho_{i_min + 1}, ...
  static RhoSequence custom(int i_min, std::vector<double> values);
  /// Custom sequence from a JSON object {"index": value, ...}.
  static RhoSequence custom_from_json(const std::string& json_text);
  /// rho_i = 1 on [i_min, i_max]: the identity convolution.
  static RhoSequence ones(int i_min = -64, int i_max = 64);

  RhoFamily family() const { return family_; }
  std::string describe() const;
  double param_a() const { return a_; }
  double param_zeta() const { return zeta_; }

  bool bounded() const { return bounded_; }
  int window_min() const { return lo_; }
  int window_max() const { return hi_; }
  bool covers(int i) const { return !bounded_ || (i >= lo_ && i <= hi_); }

  double rho(int i) const;
  /// r_i = rho_i / rho_{i-1}; closed forms for the built-in families.
  double ratio(int i) const;
  /// R_rho = prod_{i >= 1} rho_{-i}; 1 for the built-ins, the product of
  /// the stored negative entries for custom windows.
  double r_product() const;

  /// Pointwise product on the window intersection (tag becomes custom).
  friend RhoSequence rho_product(const RhoSequence& lhs,
                                 const RhoSequence& rhs);

 private:
  RhoSequence() = default;
  void require(int i) const;

  RhoFamily family_ = RhoFamily::custom;
  bool bounded_ = true;
  int lo_ = 0;
  int hi_ = 0;
  double a_ = 0.0;
  double zeta_ = 0.0;
  // Evaluator for custom sequences (table lookup or a product of two others).
  std::shared_ptr<const std::function<double(int)>> eval_;
};

RhoSequence rho_product(const RhoSequence& lhs, const RhoSequence& rhs);

/// Normalization c_r(N).
double c_r(const RhoSequence& rho, int n);

/// r_lambda(N) = c_r(N) prod_{(i,j) in lambda} r_{N-i+j}. The Frobenius form
/// c_r(N) prod_k rho_{N+alpha_k} / rho_{N-beta_k-1} is evaluated alongside
/// and must agree to 1e-12 relative.
double r_lambda(const RhoSequence& rho, const Partition& lambda, int n);

/// Frobenius form alone.
double r_lambda_frobenius(const RhoSequence& rho, const Partition& lambda,
                          int n);

/// Finitely supported Laurent polynomial sum_i w_i z^i.
struct LaurentPoly {
  std::map<int, double> coeffs;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;
};

/// Fourier-multiplier action: coefficient w_i is multiplied by rho_{-i-1}.
LaurentPoly conv_action(const RhoSequence& rho, const LaurentPoly& w);

struct RhoPlusValue {
  double value = 0.0;
  double error_estimate = 0.0;  // first omitted term for truncated sums
};

/// rho_+(z) = sum_{i >= 0} rho_i z^i. Closed forms for the families;
/// truncated at degree `trunc` for custom sequences.
RhoPlusValue rho_plus_eval(const RhoSequence& rho, double z, int trunc = 60);

}  // namespace kptau
