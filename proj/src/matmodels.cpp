#include "kptau/matmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kptau/error.hpp"

namespace kptau {

namespace {

constexpr int kMaxQuadratureN = 3;
constexpr int kMaxHciz = 4;
constexpr int kMaxLeibniz = 8;

int sign_of_half_n(int n) { return ((n * (n - 1) / 2) % 2 == 0) ? 1 : -1; }

void require_same_size(const EigenList& a, const EigenList& b) {
  if (a.size() != b.size()) throw InvalidArgument("eigenvalue lists must have equal length");
}

void require_distinct(const EigenList& a, const char* what) {
  if (!a.distinct())
    throw DegeneracyError(std::string(what) + ": eigenvalues must be pairwise distinct");
}

// Determinant of an n x n row-major array, n <= 3.
double small_det(const double* m, int n) {
  switch (n) {
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      break;
  }
  throw CapacityError("small_det supports n <= 3");
}

double vandermonde_of(const double* x, int n) {
  double prod = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) prod *= x[i] - x[j];
  return prod;
}

struct Rule1 {
  std::vector<double> x, w;
};

Rule1 rule_for(const MeasureSpec& m, int n) {
  switch (m.kind()) {
    case MeasureKind::gauss: {
      const auto& r = hermite_rule(n);
      const double s = 1.0 / std::sqrt(m.sigma());
      Rule1 out;
      for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        out.x.push_back(r.nodes[k] * s);
        out.w.push_back(r.weights[k] * s);
      }
      return out;
    }
    case MeasureKind::table:
      return {m.nodes(), m.weights()};
    case MeasureKind::density:
      break;
  }
  throw InvalidArgument("eigenvalue quadrature needs a gauss or table measure");
}

// sum over X in rule^N of prod w * g(X).
template <class G>
double tensor_sum(const Rule1& r, int n, G g) {
  const int m = static_cast<int>(r.x.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      x[k] = r.x[static_cast<std::size_t>(idx[k])];
      w *= r.w[static_cast<std::size_t>(idx[k])];
    }
    sum += w * g(x.data());
    int k = n - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  return sum;
}

template <class G>
QuadResult eigen_quadrature(const MeasureSpec& m, int n, G g) {
  if (n < 1 || n > kMaxQuadratureN)
    throw CapacityError("eigenvalue quadrature supports 1 <= N <= 3");
  if (m.kind() == MeasureKind::table) return {tensor_sum(rule_for(m, 0), n, g), 0.0};
  const double coarse = tensor_sum(rule_for(m, kDefaultHermiteNodes), n, g);
  const double fine = tensor_sum(rule_for(m, 2 * kDefaultHermiteNodes), n, g);
  return {coarse, std::abs(fine - coarse)};
}

// Delta(X) tau_r(A, X) = det(rho_+(a_i x_j)) / Delta(A), zero on coinciding X.
double delta_tau(const RhoSequence& rho, const EigenList& a, const EigenList& x) {
  if (!x.distinct()) return 0.0;
  return vandermonde(x) * tau_hypergeom_det(rho, a.size(), a, x).value;
}

}  // namespace

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double superfactorial(int n) {
  double f = 1.0;
  for (int k = 1; k <= n; ++k) f *= factorial(k);
  return f;
}

MomentMatrix::MomentMatrix(std::vector<double> moments, std::string provenance)
    : m_(std::move(moments)), provenance_(std::move(provenance)) {
  if (m_.empty() || m_.size() % 2 == 0)
    throw InvalidArgument("moment list must hold m_0 .. m_{2D}");
}

double MomentMatrix::moment(int k) const {
  if (k < 0 || k >= static_cast<int>(m_.size()))
    throw WindowError("moment index " + std::to_string(k) + " beyond 2D = " +
                      std::to_string(m_.size() - 1));
  return m_[static_cast<std::size_t>(k)];
}

Matrix MomentMatrix::hankel() const {
  const int d = degree();
  Matrix h(d + 1, d + 1);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) h(i, j) = moment(i + j);
  return h;
}

BimomentMatrix::BimomentMatrix(Matrix b, std::string provenance)
    : b_(std::move(b)), provenance_(std::move(provenance)) {
  if (b_.rows() < 1 || b_.rows() != b_.cols())
    throw InvalidArgument("bimoment matrix must be square");
  if (!b_.allFinite()) throw DivergenceError("bimoment entries are not finite");
}

double BimomentMatrix::operator()(int i, int j) const {
  if (i < 0 || j < 0 || i > degree() || j > degree())
    throw WindowError("bimoment index (" + std::to_string(i) + "," + std::to_string(j) +
                      ") beyond D = " + std::to_string(degree()));
  return b_(i, j);
}

MomentMatrix moments(const MeasureSpec& m, int degree) {
  if (degree < 0) throw InvalidArgument("moment degree must be >= 0");
  if (degree > kMaxMomentDegree)
    throw CapacityError("moment degree above " + std::to_string(kMaxMomentDegree));
  std::vector<double> list;
  for (int k = 0; k <= 2 * degree; ++k)
    list.push_back(quad1d(m, [k](double x) { return std::pow(x, k); }, k).value);
  return MomentMatrix(std::move(list), m.describe());
}

double pi_from_moments(const MomentMatrix& mm, const Partition& lambda, int n) {
  if (n < 1) throw InvalidArgument("charge N must be >= 1");
  if (lambda.length() > n) return 0.0;
  Matrix m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i - 1, j - 1) = mm.moment(lambda.part(i) - i + j + n - 1);
  return sign_of_half_n(n) * factorial(n) * det(m);
}

TauSeries moment_tau(const MomentMatrix& mm, int n, int cutoff) {
  TauSeries tau(n, cutoff, Provenance::moments);
  for (const auto& lambda : enumerate_partitions(cutoff, n))
    tau.set(lambda, pi_from_moments(mm, lambda, n));
  return tau;
}

double z_n_series(const MomentMatrix& mm, int n, const FlowVector& t, int cutoff) {
  return eval_kp(moment_tau(mm, n, cutoff), t).value;
}

Determinant z_n_rho_det(const RhoSequence& rho, const MeasureSpec& m, const EigenList& a) {
  const int n = a.size();
  require_distinct(a, "z_n_rho_det");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double aj = a[j];
      g(i, j) = quad1d(m, [&rho, aj, i](double x) {
                  return std::pow(x, i) * rho_plus_eval(rho, aj * x).value;
                }).value;
    }
  Determinant d = determinant(g);
  d.value *= sign_of_half_n(n) * factorial(n) / vandermonde(a);
  return d;
}

double z_n_ext_series(const RhoSequence& rho, const MomentMatrix& mm, int n,
                      const EigenList& a, int cutoff) {
  if (a.size() != n) throw InvalidArgument("eigenvalue list must have N entries");
  double sum = 0.0;
  for (const auto& lambda : enumerate_partitions(cutoff, n))
    sum += r_lambda(rho, lambda, n) * pi_from_moments(mm, lambda, n) * schur_eigen(lambda, a);
  return sum;
}

QuadResult z_n_ext_quadrature(const MeasureSpec& m, const EigenList& a) {
  const int n = a.size();
  require_distinct(a, "z_n_ext_quadrature");
  const double scale = superfactorial(n - 1) / vandermonde(a);
  QuadResult q = eigen_quadrature(m, n, [&a, n](const double* x) {
    double e[9];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) e[i * n + j] = std::exp(a[i] * x[j]);
    return vandermonde_of(x, n) * small_det(e, n);
  });
  q.value *= scale;
  q.error_estimate *= std::abs(scale);
  return q;
}

QuadResult z_n_quadrature(const MeasureSpec& m, int n, const FlowVector& t) {
  return eigen_quadrature(m, n, [&t, n](const double* x) {
    double exponent = 0.0;
    for (int i = 0; i < n; ++i) {
      double p = 1.0;
      for (int k = 1; k <= t.order(); ++k) {
        p *= x[i];
        exponent += t(k) * p;
      }
    }
    const double v = vandermonde_of(x, n);
    return v * v * std::exp(exponent);
  });
}

double trace_exp_series(const Matrix& a, const Matrix& x, int cutoff) {
  const int n = static_cast<int>(a.rows());
  if (n < 1 || a.cols() != n || x.rows() != n || x.cols() != n)
    throw InvalidArgument("trace_exp_series needs two N x N matrices");
  const Matrix ax = a * x;
  std::vector<double> t(static_cast<std::size_t>(std::max(cutoff, 1)));
  Matrix power = Matrix::Identity(n, n);
  for (int k = 1; k <= static_cast<int>(t.size()); ++k) {
    power = power * ax;
    t[k - 1] = power.trace() / k;
  }
  SchurJT s(FlowVector(std::move(t)), cutoff);
  double sum = 0.0;
  for (const auto& lambda : enumerate_partitions(cutoff, n))
    sum += dimension_glN(lambda, n) / pochhammer_ext(n, lambda) * s(lambda);
  return sum;
}

McCheck hciz_check(const EigenList& a, const EigenList& x, long n_samples,
                   std::uint64_t seed) {
  require_same_size(a, x);
  const int n = a.size();
  if (n > kMaxHciz) throw CapacityError("HCIZ check supports N <= 4");
  require_distinct(a, "hciz_check");
  require_distinct(x, "hciz_check");
  Matrix e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = std::exp(a[i] * x[j]);
  McCheck out;
  out.rhs = superfactorial(n - 1) * det(e) / (vandermonde(a) * vandermonde(x));
  if (n == 1) {
    // U(1) acts trivially on tr(A U X U^dagger).
    out.lhs = std::exp(a[0] * x[0]);
    out.samples = n_samples;
    out.z = out.lhs == out.rhs ? 0.0 : std::numeric_limits<double>::infinity();
    return out;
  }
  const McResult mc = mc_estimate(
      [&a, &x, n](CounterRng& rng) {
        const CMatrix u = haar_unitary(n, rng);
        double tr = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) tr += a[i] * x[j] * std::norm(u(i, j));
        return std::exp(tr);
      },
      n_samples, seed);
  out.lhs = mc.mean;
  out.stderr_ = mc.stderr_;
  out.samples = mc.samples;
  out.z = (out.lhs - out.rhs) / out.stderr_;
  return out;
}

McCheck character_check(const Partition& lambda, const EigenList& a, const EigenList& x,
                        long n_samples, std::uint64_t seed) {
  require_same_size(a, x);
  const int n = a.size();
  if (n > kMaxHciz) throw CapacityError("character check supports N <= 4");
  const double d = dimension_glN(lambda, n);
  const int order = std::max(lambda.weight(), 1);
  McCheck out;
  out.rhs = schur_eigen(lambda, a) * schur_eigen(lambda, x);
  const McResult mc = mc_estimate(
      [&](CounterRng& rng) {
        const CMatrix u = haar_unitary(n, rng);
        CMatrix xd = CMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) xd(i, i) = x[i];
        CMatrix m = u * xd * u.adjoint();
        for (int i = 0; i < n; ++i) m.row(i) *= a[i];
        std::vector<double> t(static_cast<std::size_t>(order));
        CMatrix power = CMatrix::Identity(n, n);
        for (int k = 1; k <= order; ++k) {
          power = power * m;
          t[k - 1] = power.trace().real() / k;
        }
        return d * schur_jt(lambda, FlowVector(std::move(t)));
      },
      n_samples, seed);
  out.lhs = mc.mean;
  out.stderr_ = mc.stderr_;
  out.samples = mc.samples;
  if (out.stderr_ > 0.0)
    out.z = (out.lhs - out.rhs) / out.stderr_;
  else
    out.z = std::abs(out.lhs - out.rhs) <= 1e-12 * std::max(1.0, std::abs(out.rhs))
                ? 0.0
                : std::numeric_limits<double>::infinity();
  return out;
}

BimomentMatrix bimoments(const MeasureSpec& m1, const MeasureSpec& m2, int degree) {
  if (degree < 0) throw InvalidArgument("bimoment degree must be >= 0");
  if (degree > kMaxBimomentDegree)
    throw CapacityError("bimoment degree above " + std::to_string(kMaxBimomentDegree));
  const int d = degree;
  Matrix b = Matrix::Zero(d + 1, d + 1);
  const std::string prov = m1.describe() + " x " + m2.describe();
  if (m1.kind() == MeasureKind::gauss && m2.kind() == MeasureKind::gauss) {
    if (!(4.0 * m1.sigma() * m2.sigma() > 1.0))
      throw DivergenceError("coupled Gaussian pair diverges: 4 sigma1 sigma2 <= 1");
    // After whitening every entry is a polynomial of degree <= 2D < 2n
    // against e^{-|s|^2}, so one product rule integrates all of them exactly.
    const Rule2 r = gauss_pair_rule(m1.sigma(), m2.sigma(), 1.0, kDefaultHermiteNodes);
    std::vector<double> xp(static_cast<std::size_t>(d + 1)), yp(static_cast<std::size_t>(d + 1));
    for (std::size_t k = 0; k < r.w.size(); ++k) {
      xp[0] = yp[0] = 1.0;
      for (int i = 1; i <= d; ++i) {
        xp[i] = xp[i - 1] * r.x[k];
        yp[i] = yp[i - 1] * r.y[k];
      }
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) b(i, j) += r.w[k] * xp[i] * yp[j];
    }
    return BimomentMatrix(std::move(b), prov);
  }
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      b(i, j) = quad2d_coupled(m1, m2, [i, j](double x, double y) {
                  return std::pow(x, i) * std::pow(y, j);
                }).value;
  return BimomentMatrix(std::move(b), prov);
}

double b_from_bimoments(const BimomentMatrix& bm, const Partition& lambda,
                        const Partition& mu, int n) {
  if (n < 1) throw InvalidArgument("charge N must be >= 1");
  if (lambda.length() > n || mu.length() > n) return 0.0;
  Matrix m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m(i - 1, j - 1) = bm(lambda.site(i, n), mu.site(j, n));
  return factorial(n) * superfactorial(n) * det(m);
}

TauSeries2 bimoment_tau(const BimomentMatrix& bm, int n, int cutoff) {
  TauSeries2 tau(n, cutoff, Provenance::moments);
  const auto parts = enumerate_partitions(cutoff, n);
  for (const auto& lambda : parts)
    for (const auto& mu : parts) tau.set(lambda, mu, b_from_bimoments(bm, lambda, mu, n));
  return tau;
}

double z2_ext_series(const RhoSequence& rho, const RhoSequence& rho_t,
                     const BimomentMatrix& bm, int n, const EigenList& a,
                     const EigenList& b, int cutoff) {
  if (a.size() != n || b.size() != n)
    throw InvalidArgument("eigenvalue lists must have N entries");
  const auto parts = enumerate_partitions(cutoff, n);
  std::vector<double> left, right;
  for (const auto& p : parts) {
    left.push_back(r_lambda(rho, p, n) * schur_eigen(p, a));
    right.push_back(r_lambda(rho_t, p, n) * schur_eigen(p, b));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j)
      sum += left[i] * b_from_bimoments(bm, parts[i], parts[j], n) * right[j];
  return sum;
}

Determinant z2_ext_det(const RhoSequence& rho, const RhoSequence& rho_t,
                       const MeasureSpec& m1, const MeasureSpec& m2,
                       const EigenList& a, const EigenList& b) {
  require_same_size(a, b);
  require_distinct(a, "z2_ext_det");
  require_distinct(b, "z2_ext_det");
  const int n = a.size();
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double ai = a[i], bj = b[j];
      g(i, j) = quad2d_coupled(m1, m2, [&, ai, bj](double x, double y) {
                  return rho_plus_eval(rho, ai * x).value * rho_plus_eval(rho_t, bj * y).value;
                }).value;
    }
  Determinant d = determinant(g);
  d.value *= factorial(n) * superfactorial(n) / (vandermonde(a) * vandermonde(b));
  return d;
}

GaussianClosedForm z2_gaussian_closed(double sigma, const EigenList& a, const EigenList& b) {
  if (!(4.0 * sigma * sigma > 1.0))
    throw DivergenceError("Gaussian two-matrix model diverges: 4 sigma^2 <= 1");
  require_same_size(a, b);
  require_distinct(a, "z2_gaussian_closed");
  require_distinct(b, "z2_gaussian_closed");
  const int n = a.size();
  const double q = 4.0 * sigma * sigma - 1.0;
  const double norm = factorial(n) * superfactorial(n) / (vandermonde(a) * vandermonde(b));
  GaussianClosedForm out;

  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = 2.0 * std::numbers::pi / std::sqrt(q) *
                std::exp((sigma * (a[i] * a[i] + b[j] * b[j]) + a[i] * b[j]) / q);
  out.rederived = norm * det(g);

  double sq = 0.0;
  for (int i = 0; i < n; ++i) sq += a[i] * a[i] + b[i] * b[i];
  Matrix e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = std::exp(sigma * a[i] * b[j] / (1.0 - 4.0 * sigma * sigma));
  out.literal = std::pow(2.0 * std::numbers::pi, n) * norm /
                std::pow(1.0 + 4.0 * sigma * sigma, 0.5 * n) * std::exp(sigma * sq / q) * det(e);
  return out;
}

MultiIntegral tau2_multi_int(const CoupledMeasure& mu, const RhoSequence& rho,
                             const RhoSequence& rho_t, const EigenList& a,
                             const EigenList& b, bool with_direct, int direct_nodes) {
  require_same_size(a, b);
  require_distinct(a, "tau2_multi_int");
  require_distinct(b, "tau2_multi_int");
  const int n = a.size();
  if (with_direct && n > 2) throw CapacityError("direct multiple integral supports N <= 2");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double ai = a[i], bj = b[j];
      g(i, j) = mu.integrate([&, ai, bj](double x, double y) {
                  return rho_plus_eval(rho, ai * x).value * rho_plus_eval(rho_t, bj * y).value;
                }).value;
    }
  MultiIntegral out;
  out.det_route = determinant(g);
  out.det_route.value *= factorial(n) / (vandermonde(a) * vandermonde(b));
  if (!with_direct) return out;

  const Rule2 r = mu.rule(direct_nodes);
  const std::size_t m = r.w.size();
  double sum = 0.0;
  if (n == 1) {
    for (std::size_t p = 0; p < m; ++p)
      sum += r.w[p] * delta_tau(rho, a, EigenList{r.x[p]}) * delta_tau(rho_t, b, EigenList{r.y[p]});
  } else {
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) {
        const double fx = delta_tau(rho, a, EigenList{r.x[p], r.x[q]});
        if (fx == 0.0) continue;
        sum += r.w[p] * r.w[q] * fx * delta_tau(rho_t, b, EigenList{r.y[p], r.y[q]});
      }
  }
  out.direct = sum;
  return out;
}

namespace {

using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

template <class M>
long double leibniz_sum(const M& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0L;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  long double sum = 0.0L;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    long double term = inversions % 2 == 0 ? 1.0L : -1.0L;
    for (int i = 0; i < n; ++i) term *= m(i, perm[i]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

}  // namespace

double leibniz_det(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw InvalidArgument("leibniz_det needs a square matrix");
  if (n > kMaxLeibniz) throw CapacityError("leibniz_det supports n <= 8");
  return static_cast<double>(leibniz_sum(m));
}

double andreief_lhs(const MeasureSpec& table, int n, const BasisFunction& phi,
                    const BasisFunction& psi) {
  if (table.kind() != MeasureKind::table)
    throw InvalidArgument("Andreief check needs a weight-table measure");
  if (n < 1) throw InvalidArgument("N must be >= 1");
  const Rule1 r{table.nodes(), table.weights()};
  const int m = static_cast<int>(r.x.size());
  if (n > kMaxLeibniz) throw CapacityError("Andreief check supports N <= 8");
  // Both sides accumulate in extended precision: the identity is exact, and
  // nearly dependent bases would otherwise leave cancellation noise.
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  MatrixL f(n, n), g(n, n);
  long double sum = 0.0L;
  while (true) {
    long double w = 1.0L;
    for (int j = 0; j < n; ++j) {
      const double x = r.x[static_cast<std::size_t>(idx[j])];
      w *= r.w[static_cast<std::size_t>(idx[j])];
      for (int i = 0; i < n; ++i) {
        f(i, j) = phi(i, x);
        g(i, j) = psi(i, x);
      }
    }
    sum += w * leibniz_sum(f) * leibniz_sum(g);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  return static_cast<double>(sum);
}

double andreief_rhs(const MeasureSpec& table, int n, const BasisFunction& phi,
                    const BasisFunction& psi) {
  if (table.kind() != MeasureKind::table)
    throw InvalidArgument("Andreief check needs a weight-table measure");
  MatrixL g = MatrixL::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t k = 0; k < table.nodes().size(); ++k)
        g(i, j) += static_cast<long double>(table.weights()[k]) * phi(i, table.nodes()[k]) *
                   psi(j, table.nodes()[k]);
  return static_cast<double>(static_cast<long double>(factorial(n)) *
                             g.partialPivLu().determinant());
}

}  // namespace kptau
