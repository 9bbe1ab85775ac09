#pragma once

#include <string>
#include <utility>

#include "kptau/convolution.hpp"
#include "kptau/grassmann.hpp"
#include "kptau/linalg.hpp"
#include "kptau/partition.hpp"
#include "kptau/symfunc.hpp"

namespace kptau {

enum class Provenance { frame, moments, manual };

std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& text);

/// Coefficients with magnitude below this are not stored.
inline constexpr double kPruneBelow = 1e-300;

/// Truncated single expansion tau(N, t) = sum_lambda pi_N(lambda) s_lambda(t).
///
/// Stored partitions satisfy |lambda| <= cutoff; frame- and moment-sourced
/// series also enforce length(lambda) <= N. The series is projective, so
/// nothing pins the normalization of pi_N(()).
class TauSeries {
 public:
  TauSeries(int charge, int cutoff, Provenance provenance = Provenance::manual);

  int charge() const { return charge_; }
  int cutoff() const { return cutoff_; }
  Provenance provenance() const { return provenance_; }
  const PartitionMap<double>& coeffs() const { return coeffs_; }

  /// Stores (or prunes) one coefficient. Throws WindowError when lambda
  /// breaks the truncation discipline.
  void set(const Partition& lambda, double value);
  /// Stored coefficient, 0 when absent.
  double coeff(const Partition& lambda) const;

  static TauSeries from_frame(const FiniteFrame& w, int cutoff);

  /// {"charge": N, "cutoff": k, "provenance": "...",
  ///  "coeffs": [{"lambda": [...], "value": v}, ...]}
  std::string to_json() const;
  static TauSeries from_json(const std::string& text);

 private:
  int charge_;
  int cutoff_;
  Provenance provenance_;
  PartitionMap<double> coeffs_;
};

using PartitionPair = std::pair<Partition, Partition>;

/// Graded order on pairs: by lambda, then by mu.
struct PairLess {
  bool operator()(const PartitionPair& x, const PartitionPair& y) const {
    GradedLess less;
    if (less(x.first, y.first)) return true;
    if (less(y.first, x.first)) return false;
    return less(x.second, y.second);
  }
};

/// Truncated double expansion sum B_N(lambda, mu) s_lambda(t) s_mu(u); both
/// weights are capped by the cutoff.
class TauSeries2 {
 public:
  TauSeries2(int charge, int cutoff, Provenance provenance = Provenance::manual);

  int charge() const { return charge_; }
  int cutoff() const { return cutoff_; }
  Provenance provenance() const { return provenance_; }
  const std::map<PartitionPair, double, PairLess>& coeffs() const { return coeffs_; }

  void set(const Partition& lambda, const Partition& mu, double value);
  double coeff(const Partition& lambda, const Partition& mu) const;

  /// Same layout as TauSeries with an extra "mu" array per entry.
  std::string to_json() const;
  static TauSeries2 from_json(const std::string& text);

 private:
  int charge_;
  int cutoff_;
  Provenance provenance_;
  std::map<PartitionPair, double, PairLess> coeffs_;
};

struct SeriesValue {
  double value = 0.0;
  /// Magnitude of the summed contributions from the heaviest stored stratum.
  double top_stratum = 0.0;
};

SeriesValue eval_kp(const TauSeries& tau, const FlowVector& t);
SeriesValue eval_2kp(const TauSeries2& tau, const FlowVector& t, const FlowVector& u);

/// pi(lambda) -> r_lambda(N) pi(lambda).
TauSeries apply_conv(const RhoSequence& rho, const TauSeries& tau);
/// B(lambda, mu) -> r_lambda(N) B(lambda, mu) rt_mu(N).
TauSeries2 apply_conv2(const RhoSequence& rho, const RhoSequence& rho_t,
                       const TauSeries2& tau);

struct HypergeomSeries {
  double value = 0.0;
  double last_stratum = 0.0;  // |sum over |lambda| == cutoff|
  bool converged = true;      // last_stratum <= 1e-6 |value|
};

/// tau_r(N, [A], [B]) = sum_{l(lambda) <= N} r_lambda(N) s_lambda(A) s_lambda(B)
/// truncated at |lambda| <= cutoff. Both lists must have N entries.
HypergeomSeries tau_hypergeom_series(const RhoSequence& rho, int n,
                                     const EigenList& a, const EigenList& b,
                                     int cutoff);

/// det(rho_+(a_i b_j)) / (Vandermonde(A) Vandermonde(B)). The condition
/// field is that of the N x N determinant.
Determinant tau_hypergeom_det(const RhoSequence& rho, int n, const EigenList& a,
                              const EigenList& b);

enum class MiwaShift { standard, paper_literal };

std::string to_string(MiwaShift c);
MiwaShift parse_miwa_shift(const std::string& text);

/// The shift vector [z^{-1}]: 1/(i z^i) (standard) or i/z^i (literal), for
/// i = 1..order.
FlowVector miwa_shift(double z, int order, MiwaShift convention);

/// Psi_N(z, t) = exp(sum t_i z^i) tau(N, t - [z^{-1}]) / tau(N, t). Needs
/// |z| > 1. The shift is carried to order max(K, cutoff).
double baker_akhiezer(const TauSeries& tau, double z, const FlowVector& t,
                      MiwaShift convention = MiwaShift::standard);

}  // namespace kptau
