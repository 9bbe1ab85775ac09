#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kptau/convolution.hpp"
#include "kptau/integrate.hpp"
#include "kptau/linalg.hpp"
#include "kptau/partition.hpp"
#include "kptau/symfunc.hpp"
#include "kptau/tau.hpp"

namespace kptau {

inline constexpr int kMaxMomentDegree = 40;
inline constexpr int kMaxBimomentDegree = 30;

/// Hankel moment matrix M_ij = m_{i+j}, 0 <= i, j <= D, stored as the list
/// m_0 .. m_{2D}.
class MomentMatrix {
 public:
  MomentMatrix(std::vector<double> moments, std::string provenance);

  int degree() const { return static_cast<int>(m_.size() - 1) / 2; }
  double moment(int k) const;
  double operator()(int i, int j) const { return moment(i + j); }
  Matrix hankel() const;
  const std::vector<double>& list() const { return m_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<double> m_;
  std::string provenance_;
};

/// Bimoments B_ij = integral of e^{xy} x^i y^j against m1(x) m2(y).
class BimomentMatrix {
 public:
  BimomentMatrix(Matrix b, std::string provenance);

  int degree() const { return static_cast<int>(b_.rows()) - 1; }
  double operator()(int i, int j) const;
  const Matrix& matrix() const { return b_; }
  const std::string& provenance() const { return provenance_; }

 private:
  Matrix b_;
  std::string provenance_;
};

/// m_0 .. m_{2D} by quad1d. D <= 40.
MomentMatrix moments(const MeasureSpec& m, int degree);

/// (-1)^{N(N-1)/2} N! det(m_{lambda_i - i + j + N - 1}), 1 <= i, j <= N.
double pi_from_moments(const MomentMatrix& mm, const Partition& lambda, int n);

/// The moment-sourced series {lambda -> pi(lambda)}, length(lambda) <= N.
TauSeries moment_tau(const MomentMatrix& mm, int n, int cutoff);

/// Z_N(t) = sum pi(lambda) s_lambda(t), |lambda| <= cutoff.
double z_n_series(const MomentMatrix& mm, int n, const FlowVector& t, int cutoff);

/// (-1)^{N(N-1)/2} N! / Vandermonde(A) det(G), with
/// G_ij = integral of x^{i-1} rho_+(a_j x) against m; N = |a|.
Determinant z_n_rho_det(const RhoSequence& rho, const MeasureSpec& m, const EigenList& a);

/// sum r_lambda(N) pi(lambda) s_lambda([A]), |lambda| <= cutoff,
/// length(lambda) <= N.
double z_n_ext_series(const RhoSequence& rho, const MomentMatrix& mm, int n,
                      const EigenList& a, int cutoff);

/// Eigenvalue quadrature of Z_{N,ext}(A) = integral dmu(X) e^{tr AX}: the
/// angular part is done exactly, leaving
///   prod_{k<N} k! / Vandermonde(A) * sum_X w(X) Vandermonde(X) det(e^{a_i x_j}).
/// Tensor product rule; gauss or table measures, N <= 3.
QuadResult z_n_ext_quadrature(const MeasureSpec& m, const EigenList& a);

/// Eigenvalue quadrature of Z_N(t) with Vandermonde(X)^2, N <= 3.
QuadResult z_n_quadrature(const MeasureSpec& m, int n, const FlowVector& t);

/// sum_{l(lambda) <= N} d_{lambda,N} / (N)_lambda s_lambda([AX]) for real
/// N x N matrices, |lambda| <= cutoff. Tends to e^{tr AX}.
double trace_exp_series(const Matrix& a, const Matrix& x, int cutoff);

struct McCheck {
  double lhs = 0.0;      // Monte Carlo mean
  double stderr_ = 0.0;  // its standard error
  double rhs = 0.0;      // closed form
  double z = 0.0;        // (lhs - rhs) / stderr, 0 when both agree exactly
  long samples = 0;
};

/// E_U[e^{tr(A U X U^dagger)}] against prod_{k<N} k! det(e^{a_i x_j}) /
/// (Vandermonde(A) Vandermonde(X)). N = |a| = |x| <= 4.
McCheck hciz_check(const EigenList& a, const EigenList& x, long n_samples,
                   std::uint64_t seed);

/// d_{lambda,N} E_U[s_lambda([A U X U^dagger])] against s_lambda(A) s_lambda(X).
McCheck character_check(const Partition& lambda, const EigenList& a, const EigenList& x,
                        long n_samples, std::uint64_t seed);

/// Bimoments by quad2d_coupled. D <= 30; DivergenceError for Gaussian pairs
/// with 4 sigma1 sigma2 <= 1.
BimomentMatrix bimoments(const MeasureSpec& m1, const MeasureSpec& m2, int degree);

/// N! prod_{k=1..N} k! det(B_{lambda_i - i + N, mu_j - j + N}).
double b_from_bimoments(const BimomentMatrix& bm, const Partition& lambda,
                        const Partition& mu, int n);

/// {(lambda, mu) -> B(lambda, mu)} over |lambda|, |mu| <= cutoff.
TauSeries2 bimoment_tau(const BimomentMatrix& bm, int n, int cutoff);

/// sum r_lambda(N) B(lambda, mu) rt_mu(N) s_lambda([A]) s_mu([B]).
double z2_ext_series(const RhoSequence& rho, const RhoSequence& rho_t,
                     const BimomentMatrix& bm, int n, const EigenList& a,
                     const EigenList& b, int cutoff);

/// N! prod_{k=1..N} k! / (Vandermonde(A) Vandermonde(B)) det(G), with
/// G_ij = integral of e^{xy} rho_+(a_i x) rt_+(b_j y) against m1(x) m2(y).
Determinant z2_ext_det(const RhoSequence& rho, const RhoSequence& rho_t,
                       const MeasureSpec& m1, const MeasureSpec& m2,
                       const EigenList& a, const EigenList& b);

struct GaussianClosedForm {
  /// Completing the square: G_ij = 2 pi / sqrt(4 s^2 - 1)
  /// exp((s (a_i^2 + b_j^2) + a_i b_j) / (4 s^2 - 1)).
  double rederived = 0.0;
  /// (2 pi)^N N! prod k! / ((1 + 4 s^2)^{N/2} Vandermonde(A) Vandermonde(B))
  /// exp(s sum (a_i^2 + b_i^2) / (4 s^2 - 1)) det(exp(s a_i b_j / (1 - 4 s^2))).
  double literal = 0.0;
};

/// Both closed forms for rho = rt = exp and m1 = m2 = gauss(sigma).
GaussianClosedForm z2_gaussian_closed(double sigma, const EigenList& a, const EigenList& b);

struct MultiIntegral {
  Determinant det_route;          // N! / (Vandermonde(A) Vandermonde(B)) det(G)
  std::optional<double> direct;   // 2N-dimensional sum, N <= 2 only
};

/// General coupled measure: G_ij = integral of rho_+(a_i x) rt_+(b_j y) dmu(x, y).
/// The direct route sums Vandermonde(X) tau_r(A, X) Vandermonde(Y) tau_rt(B, Y)
/// over the product of N copies of the measure's rule (direct_nodes points
/// per axis for a Gaussian pair).
MultiIntegral tau2_multi_int(const CoupledMeasure& mu, const RhoSequence& rho,
                             const RhoSequence& rho_t, const EigenList& a,
                             const EigenList& b, bool with_direct = true,
                             int direct_nodes = 32);

using BasisFunction = std::function<double(int, double)>;

/// Andreief identity on a weight table: the N-fold sum of
/// det(phi_i(x_j)) det(psi_i(x_j)) prod w with Leibniz-expanded determinants,
/// and N! det(sum_x w phi_i(x) psi_j(x)). Basis indices are 0-based.
double andreief_lhs(const MeasureSpec& table, int n, const BasisFunction& phi,
                    const BasisFunction& psi);
double andreief_rhs(const MeasureSpec& table, int n, const BasisFunction& phi,
                    const BasisFunction& psi);

/// Leibniz expansion of a small determinant (reference for LU results).
double leibniz_det(const Matrix& m);

/// prod_{k=1}^{n} k!.
double superfactorial(int n);
double factorial(int n);

}  // namespace kptau
