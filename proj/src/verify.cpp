#include "kptau/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "json.hpp"
#include "kptau/convolution.hpp"
#include "kptau/error.hpp"
#include "kptau/grassmann.hpp"
#include "kptau/integrate.hpp"
#include "kptau/matmodels.hpp"
#include "kptau/partition.hpp"
#include "kptau/symfunc.hpp"
#include "kptau/tau.hpp"

namespace kptau {

namespace {

constexpr double kZMax = 3.0;

// Independent substream per suite so suites can run alone or inside `all`
// with identical output.
enum Stream : std::uint64_t {
  kSchurStream = 1,
  kCauchyStream,
  kPluckerStream,
  kSemigroupStream,
  kDetHypergeomStream,
  kAndreiefStream,
  kProp2Stream,
  kProp3Stream,
  kProp56Stream,
  kProp78Stream,
};

double rel(double value, double oracle) {
  if (value == oracle) return 0.0;
  return std::abs(value - oracle) / std::abs(oracle);
}

double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

int pick(CounterRng& rng, int count) {
  return static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(count));
}

std::vector<double> spread_values(CounterRng& rng, int n, double lo, double hi, double gap) {
  while (true) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(uniform(rng, lo, hi));
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = std::abs(v[i] - v[j]) >= gap;
    if (ok) return v;
  }
}

// Largest deviation over a family of cases.
class Worst {
 public:
  void add(double value, double oracle, double dev) {
    // A non-finite deviation is sticky; otherwise keep the largest.
    const bool worse = !std::isfinite(dev) || dev > dev_;
    if (count_ == 0 || (std::isfinite(dev_) && worse)) {
      value_ = value;
      oracle_ = oracle;
      dev_ = dev;
    }
    ++count_;
  }
  Report report(std::string quantity, std::string method, double tolerance) const {
    Report r;
    r.quantity = std::move(quantity);
    r.method = std::move(method);
    r.value = value_;
    r.oracle = oracle_;
    r.rel_dev = dev_;
    r.tolerance = tolerance;
    r.pass = std::isfinite(dev_) && dev_ <= tolerance;
    return r;
  }

 private:
  double value_ = 0.0, oracle_ = 0.0, dev_ = 0.0;
  long count_ = 0;
};

Report single(std::string quantity, std::string method, double value, double oracle,
              double dev, double tolerance) {
  Worst w;
  w.add(value, oracle, dev);
  return w.report(std::move(quantity), std::move(method), tolerance);
}

Report informational(std::string quantity, std::string method, double value, double oracle) {
  Report r;
  r.quantity = std::move(quantity);
  r.method = std::move(method);
  r.value = value;
  r.oracle = oracle;
  r.rel_dev = rel(value, oracle);
  r.pass = true;
  return r;
}

Report mc_report(std::string quantity, const McCheck& c) {
  Report r;
  r.quantity = std::move(quantity);
  r.method = "monte-carlo, " + std::to_string(c.samples) + " Haar samples (rel_dev = |z|)";
  r.value = c.lhs;
  r.oracle = c.rhs;
  r.rel_dev = std::abs(c.z);
  r.tolerance = kZMax;
  r.pass = std::isfinite(c.z) && std::abs(c.z) <= kZMax;
  return r;
}

RhoSequence random_custom(CounterRng& rng, int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) {
    const double mag = uniform(rng, 0.5, 2.0);
    v.push_back(rng.uniform() < 0.5 ? -mag : mag);
  }
  return RhoSequence::custom(lo, std::move(v));
}

RhoSequence random_rho(CounterRng& rng) {
  switch (pick(rng, 3)) {
    case 0:
      return RhoSequence::exp_family();
    case 1:
      return RhoSequence::binomial(uniform(rng, 0.5, 3.0), uniform(rng, 0.1, 0.9));
    default:
      return random_custom(rng, -4, 24);
  }
}

RhoSequence dyadic_custom(CounterRng& rng, int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) {
    const double mag = std::ldexp(1.0, pick(rng, 7) - 3);
    v.push_back(rng.uniform() < 0.5 ? -mag : mag);
  }
  return RhoSequence::custom(lo, std::move(v));
}

MeasureSpec legendre_table() {
  // 20-point Gauss-Legendre rule on [-1, 1] as a point-mass measure.
  using Rule = boost::math::quadrature::gauss<double, 20>;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < Rule::abscissa().size(); ++k) {
    pts.emplace_back(Rule::abscissa()[k], Rule::weights()[k]);
    if (Rule::abscissa()[k] != 0.0) pts.emplace_back(-Rule::abscissa()[k], Rule::weights()[k]);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> x, w;
  for (const auto& [xi, wi] : pts) {
    x.push_back(xi);
    w.push_back(wi);
  }
  return MeasureSpec::table(std::move(x), std::move(w));
}

// ---------------------------------------------------------------- suites

std::vector<Report> suite_schur(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kSchurStream);
  Worst worst;
  for (int c = 0; c < 50; ++c) {
    const int n = 2 + pick(rng, 3);
    const auto parts = enumerate_partitions(8, n);
    const Partition& lambda = parts[static_cast<std::size_t>(pick(rng, static_cast<int>(parts.size())))];
    const EigenList a(spread_values(rng, n, -1.0, 1.0, 0.05));
    const double by_char = schur_char(lambda, a);
    const double by_jt = schur_jt(lambda, miwa(a, lambda.weight() + n));
    worst.add(by_char, by_jt, std::abs(by_char - by_jt) / (1.0 + std::abs(by_jt)));
  }
  return {worst.report("schur-two-route: character vs Jacobi-Trudi",
                       "50 cases, N in {2,3,4}, |lambda| <= 8; dev/(1+|value|)",
                       opts.tol.value_or(1e-9))};
}

std::vector<Report> suite_cauchy(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kCauchyStream);
  Worst worst;
  for (int c = 0; c < 20; ++c) {
    std::vector<double> t, u;
    const int kt = 1 + pick(rng, 3), ku = 1 + pick(rng, 3);
    for (int i = 0; i < kt; ++i) t.push_back(uniform(rng, -0.1, 0.1));
    for (int i = 0; i < ku; ++i) u.push_back(uniform(rng, -0.1, 0.1));
    const FlowVector ft(t), fu(u);
    const double lhs = cauchy_littlewood_lhs(ft, fu, 10);
    const double rhs = cauchy_littlewood_rhs(ft, fu);
    worst.add(lhs, rhs, std::abs(lhs - rhs));
  }
  Worst diag;
  {
    // Same identity through a diagonal two-index tau series.
    const FlowVector t{0.1, -0.05, 0.08}, u{-0.07, 0.1, 0.02};
    TauSeries2 delta(10, 10);
    for (const auto& p : enumerate_partitions(10, 10)) delta.set(p, p, 1.0);
    const double v = eval_2kp(delta, t, u).value;
    const double o = cauchy_littlewood_rhs(t, u);
    diag.add(v, o, std::abs(v - o));
  }
  // Box corner: the cutoff-10 tail is about 1.3e-7 here, so no 1e-8 bound holds.
  const FlowVector corner{0.1, 0.1, 0.1};
  const double cl = cauchy_littlewood_lhs(corner, corner, 10);
  const double cr = cauchy_littlewood_rhs(corner, corner);
  Report edge = informational("cauchy-littlewood: truncation tail at the box corner",
                              "t = u = (0.1, 0.1, 0.1), cutoff 10; absolute deviation "
                              "(informational)",
                              cl, cr);
  edge.rel_dev = std::abs(cl - cr);
  return {worst.report("cauchy-littlewood: truncated sum vs exponential",
                       "20 cases, |t|,|u| <= 0.1, K <= 3, cutoff 10; absolute deviation",
                       opts.tol.value_or(1e-8)),
          diag.report("cauchy-littlewood: eval_2kp on unit diagonal coefficients",
                      "cutoff 10; absolute deviation", opts.tol.value_or(1e-8)),
          edge};
}

std::vector<Report> suite_plucker(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kPluckerStream);
  constexpr int kCutoff = 8;
  Worst before, after;
  for (int c = 0; c < 100; ++c) {
    const int n = 2 + pick(rng, 3);
    const int depth = n + kCutoff + 2;
    Matrix m(depth, n);
    for (int i = 0; i < depth; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
    const FiniteFrame w(m, n);
    const TauSeries tau = TauSeries::from_frame(w, kCutoff);
    const TauSeries conv = apply_conv(random_rho(rng), tau);
    // Labels 0..top keep every minor inside the table (weight <= cutoff).
    const int top = n - 1 + kCutoff / n;
    std::vector<int> labels(static_cast<std::size_t>(top + 1));
    for (int i = 0; i <= top; ++i) labels[static_cast<std::size_t>(i)] = i;
    auto shuffled = [&] {
      std::vector<int> v = labels;
      for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(pick(rng, static_cast<int>(i)))]);
      return v;
    };
    const auto la = shuffled();
    const auto lb = shuffled();
    const std::vector<int> rows_a(la.begin(), la.begin() + (n - 1));
    const std::vector<int> rows_b(lb.begin(), lb.begin() + (n + 1));
    const auto r0 = plucker_residual(tau.coeffs(), n, kCutoff, rows_a, rows_b);
    const auto r1 = plucker_residual(conv.coeffs(), n, kCutoff, rows_a, rows_b);
    before.add(r0.residual, 0.0, r0.relative());
    after.add(r1.residual, 0.0, r1.relative());
  }
  return {before.report("plucker: exchange residual of frame coefficients",
                        "100 random frames, N in {2,3,4}, |lambda| <= 8; |residual|/sum|terms|",
                        opts.tol.value_or(1e-10)),
          after.report("plucker: exchange residual after apply_conv",
                       "same instances, random exp/binomial/custom rho",
                       opts.tol.value_or(1e-10))};
}

std::vector<Report> suite_semigroup(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kSemigroupStream);
  Worst mult;
  for (int c = 0; c < 20; ++c) {
    const RhoSequence rho = random_rho(rng);
    const RhoSequence rho_t = random_rho(rng);
    const RhoSequence prod = rho_product(rho_t, rho);
    const int n = 1 + pick(rng, 5);
    const auto parts = enumerate_partitions(10, n);
    const Partition& lambda = parts[static_cast<std::size_t>(pick(rng, static_cast<int>(parts.size())))];
    const double lhs = r_lambda(prod, lambda, n);
    const double rhs = r_lambda(rho_t, lambda, n) * r_lambda(rho, lambda, n);
    mult.add(lhs, rhs, rel(lhs, rhs));
  }

  auto random_series = [&](int n, int cutoff) {
    TauSeries tau(n, cutoff);
    for (const auto& p : enumerate_partitions(cutoff, n)) tau.set(p, uniform(rng, -1.0, 1.0));
    return tau;
  };
  auto compare = [](const TauSeries& x, const TauSeries& y, Worst& w) {
    for (const auto& [lambda, v] : x.coeffs()) {
      const double o = y.coeff(lambda);
      w.add(v, o, rel(v, o));
    }
  };

  // Powers of two make every product exact, so composition and product must
  // agree bit for bit.
  Worst exact;
  for (int c = 0; c < 10; ++c) {
    const RhoSequence rho = dyadic_custom(rng, -4, 16);
    const RhoSequence rho_t = dyadic_custom(rng, -4, 16);
    const TauSeries tau = random_series(1 + pick(rng, 4), 8);
    compare(apply_conv(rho_t, apply_conv(rho, tau)), apply_conv(rho_product(rho_t, rho), tau),
            exact);
    LaurentPoly w;
    for (int i = -8; i <= 3; ++i) w.coeffs[i] = uniform(rng, -1.0, 1.0);
    const LaurentPoly lhs = conv_action(rho_t, conv_action(rho, w));
    const LaurentPoly rhs = conv_action(rho_product(rho_t, rho), w);
    for (const auto& [i, v] : lhs.coeffs) exact.add(v, rhs.coeffs.at(i), rel(v, rhs.coeffs.at(i)));
  }

  // General real data: the two sides group the same factors differently.
  Worst general;
  for (int c = 0; c < 10; ++c) {
    const RhoSequence rho = random_rho(rng);
    const RhoSequence rho_t = random_rho(rng);
    const TauSeries tau = random_series(1 + pick(rng, 4), 8);
    compare(apply_conv(rho_t, apply_conv(rho, tau)), apply_conv(rho_product(rho_t, rho), tau),
            general);
  }
  return {mult.report("semigroup: r_lambda multiplicativity",
                      "20 random (rho, rho~, lambda, N) over exp/binomial/custom",
                      opts.tol.value_or(1e-12)),
          exact.report("semigroup: composition vs product, dyadic rho",
                       "bitwise comparison of apply_conv and conv_action", 0.0),
          general.report("semigroup: composition vs product, real rho",
                         "rounding-level agreement of apply_conv", opts.tol.value_or(1e-12))};
}

std::vector<Report> suite_example1(const VerifyOptions& opts) {
  const RhoSequence e = RhoSequence::exp_family();
  Worst closed;
  for (int n = 1; n <= 5; ++n)
    for (const auto& lambda : enumerate_partitions(10, n)) {
      const double v = r_lambda(e, lambda, n) * superfactorial(n - 1) * pochhammer_ext(n, lambda);
      closed.add(v, 1.0, std::abs(v - 1.0));
    }
  Worst binom;
  const double a = 2.5, zeta = 0.4;
  const RhoSequence b = RhoSequence::binomial(a, zeta);
  for (int n = 1; n <= 4; ++n)
    for (const auto& lambda : enumerate_partitions(8, n)) {
      double pref = 1.0;
      for (int i = 0; i < n; ++i) {
        double poch = 1.0;
        for (int k = 0; k < i; ++k) poch *= a + k;
        pref *= poch / factorial(i);
      }
      const double o = pref * std::pow(zeta, lambda.weight() + n * (n - 1) / 2) *
                       pochhammer_ext(a - 1 + n, lambda) / pochhammer_ext(n, lambda);
      const double v = r_lambda(b, lambda, n);
      binom.add(v, o, rel(v, o));
    }
  return {closed.report("example1-closedform: r_lambda(N) prod k! (N)_lambda",
                        "all l(lambda) <= N <= 5, |lambda| <= 10; oracle 1",
                        opts.tol.value_or(1e-12)),
          binom.report("example1-closedform: binomial family closed form",
                       "a = 2.5, zeta = 0.4, N <= 4, |lambda| <= 8", opts.tol.value_or(1e-10))};
}

std::vector<Report> suite_dethypergeom(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kDetHypergeomStream);
  Worst worst;
  bool all_converged = true;
  for (int c = 0; c < 50; ++c) {
    const RhoSequence rho = c % 2 == 0 ? RhoSequence::exp_family()
                                       : RhoSequence::binomial(uniform(rng, 0.5, 3.0),
                                                               uniform(rng, 0.1, 0.5));
    const int n = 2 + pick(rng, 2);
    const EigenList a(spread_values(rng, n, 0.05, 0.5, 0.05));
    const EigenList b(spread_values(rng, n, 0.05, 0.5, 0.05));
    const auto series = tau_hypergeom_series(rho, n, a, b, 20);
    const double d = tau_hypergeom_det(rho, n, a, b).value;
    all_converged = all_converged && series.converged;
    worst.add(series.value, d, rel(series.value, d));
  }
  return {worst.report("dethypergeom: series (cutoff 20) vs determinant",
                       std::string("50 draws, exp and binomial, N in {2,3}, eigenvalues in "
                                   "[0.05, 0.5]") +
                           (all_converged ? "" : "; some series not converged"),
                       opts.tol.value_or(1e-7))};
}

std::vector<Report> suite_andreief(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kAndreiefStream);
  Worst worst;
  for (int c = 0; c < 12; ++c) {
    const int n = 1 + c % 3;
    const int nodes = n + pick(rng, 7 - n);
    const auto x = spread_values(rng, nodes, -1.5, 1.5, 0.1);
    std::vector<double> xs = x;
    std::sort(xs.begin(), xs.end());
    std::vector<double> ws;
    for (int k = 0; k < nodes; ++k) ws.push_back(uniform(rng, 0.1, 1.0));
    const MeasureSpec table = MeasureSpec::table(xs, ws);
    std::vector<double> cp, cq;
    for (int i = 0; i < n; ++i) {
      cp.push_back(uniform(rng, -1.0, 1.0));
      cq.push_back(uniform(rng, 0.2, 1.2));
    }
    const BasisFunction phi = [cp](int i, double t) {
      return std::pow(t, i) + cp[static_cast<std::size_t>(i)];
    };
    const BasisFunction psi = [cq](int i, double t) {
      return std::exp(cq[static_cast<std::size_t>(i)] * t * (i + 1));
    };
    const double lhs = andreief_lhs(table, n, phi, psi);
    const double rhs = andreief_rhs(table, n, phi, psi);
    worst.add(lhs, rhs, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return {worst.report("andreief: permutation-expanded sum vs N! det",
                       "12 discrete measures with <= 6 nodes, N in {1,2,3}",
                       opts.tol.value_or(1e-12))};
}

std::vector<Report> suite_prop2(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kProp2Stream);
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const MomentMatrix mm = moments(g, 20);
  const RhoSequence e = RhoSequence::exp_family();
  Worst series_vs_quad, quad_vs_closed;
  for (int c = 0; c < 5; ++c) {
    const EigenList a(spread_values(rng, 2, -0.5, 0.5, 0.05));
    const double series = superfactorial(1) * z_n_ext_series(e, mm, 2, a, 18);
    const double quad = z_n_ext_quadrature(g, a).value;
    series_vs_quad.add(series, quad, rel(series, quad));
    // Gaussian weight: Z_{2,ext}(A) = pi e^{(a1^2 + a2^2)/4}.
    const double closed = std::numbers::pi * std::exp((a[0] * a[0] + a[1] * a[1]) / 4.0);
    quad_vs_closed.add(quad, closed, rel(quad, closed));
  }
  return {series_vs_quad.report("prop2: 1! x convolved series vs eigenvalue quadrature",
                                "N = 2, gauss(1), 5 spectra with radius <= 0.5, cutoff 18",
                                opts.tol.value_or(1e-5)),
          quad_vs_closed.report("prop2: eigenvalue quadrature vs Gaussian closed form",
                                "pi exp((a1^2 + a2^2)/4)", opts.tol.value_or(1e-10))};
}

std::vector<Report> suite_prop3(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kProp3Stream);
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const MeasureSpec leg = legendre_table();
  const MomentMatrix mg = moments(g, 20);
  const MomentMatrix ml = moments(leg, 20);
  Worst worst;
  bool ill = false;
  for (int c = 0; c < 10; ++c) {
    const EigenList a(spread_values(rng, 2, -0.5, 0.5, 0.05));
    if (c % 2 == 0) {
      const RhoSequence e = RhoSequence::exp_family();
      const Determinant d = z_n_rho_det(e, g, a);
      const double s = z_n_ext_series(e, mg, 2, a, 18);
      ill = ill || d.ill_conditioned();
      worst.add(d.value, s, rel(d.value, s));
    } else {
      const RhoSequence b = RhoSequence::binomial(uniform(rng, 0.5, 3.0), uniform(rng, 0.1, 0.5));
      const Determinant d = z_n_rho_det(b, leg, a);
      const double s = z_n_ext_series(b, ml, 2, a, 18);
      ill = ill || d.ill_conditioned();
      worst.add(d.value, s, rel(d.value, s));
    }
  }
  return {worst.report(
      "prop3: Z_{N,rho} determinant vs convolved series",
      std::string("N = 2, 10 instances: exp with gauss(1), binomial with a 20-node "
                  "Gauss-Legendre table on [-1,1]; cutoff 18") +
          (ill ? "; ill-conditioned determinant flagged" : ""),
      opts.tol.value_or(1e-6))};
}

std::vector<Report> suite_prop56(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kProp56Stream);
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const BimomentMatrix bm = bimoments(g, g, 16);
  const RhoSequence e = RhoSequence::exp_family();
  Worst series_vs_det, det_vs_closed;
  for (int c = 0; c < 5; ++c) {
    const EigenList a(spread_values(rng, 2, -0.3, 0.3, 0.05));
    const EigenList b(spread_values(rng, 2, -0.3, 0.3, 0.05));
    const double s = z2_ext_series(e, e, bm, 2, a, b, 14);
    const double d = z2_ext_det(e, e, g, g, a, b).value;
    series_vs_det.add(s, d, rel(s, d));
    const double closed = z2_gaussian_closed(1.0, a, b).rederived;
    det_vs_closed.add(d, closed, rel(d, closed));
  }
  return {series_vs_det.report("prop56: two-matrix series (cutoff 14) vs determinant",
                               "N = 2, gauss(1) x gauss(1), exp x exp, radii <= 0.3",
                               opts.tol.value_or(1e-5)),
          det_vs_closed.report("prop56: determinant vs completed-square closed form",
                               "same instances", opts.tol.value_or(1e-8))};
}

std::vector<Report> suite_hciz(const VerifyOptions& opts) {
  const int n = opts.n;
  std::vector<double> av{1.0, 0.2, -0.5, 0.6}, xv{0.7, -0.3, 0.4, -0.8};
  av.resize(static_cast<std::size_t>(n));
  xv.resize(static_cast<std::size_t>(n));
  const EigenList a(av), x(xv);
  std::vector<Report> out;
  out.push_back(mc_report("hciz: E[exp tr(A U X U^dagger)] vs determinant closed form",
                          hciz_check(a, x, opts.samples, opts.seed)));
  if (n >= 2)
    out.push_back(mc_report("hciz: d_{(2,1),N} E[s_(2,1)] vs s_(2,1)(A) s_(2,1)(X)",
                            character_check(Partition{2, 1}, a, x, opts.samples,
                                            opts.seed + 1)));
  return out;
}

std::vector<Report> suite_gaussian(const VerifyOptions& opts) {
  std::vector<Report> out;
  const EigenList a{0.3}, b{0.2};
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const double oracle = quad2d_coupled(g, g, [&](double x, double y) {
                          return std::exp(a[0] * x + b[0] * y);
                        }).value;
  const auto closed = z2_gaussian_closed(1.0, a, b);
  out.push_back(single("gaussian-example: completed-square form vs quadrature",
                       "N = 1, sigma = 1, a = 0.3, b = 0.2", closed.rederived, oracle,
                       rel(closed.rederived, oracle), opts.tol.value_or(1e-8)));
  out.push_back(informational("gaussian-example: displayed constants vs quadrature",
                              "N = 1, sigma = 1 (informational)", closed.literal, oracle));
  const EigenList a2{0.25, -0.1}, b2{0.15, -0.2};
  for (double sigma : {1.0, 2.0, 5.0, 10.0}) {
    const MeasureSpec gs = MeasureSpec::gauss(sigma);
    const RhoSequence e = RhoSequence::exp_family();
    const double d = z2_ext_det(e, e, gs, gs, a2, b2).value;
    const auto c = z2_gaussian_closed(sigma, a2, b2);
    const std::string tag = "N = 2, sigma = " + std::to_string(static_cast<int>(sigma));
    out.push_back(single("gaussian-example: completed-square form vs determinant quadrature",
                         tag, c.rederived, d, rel(c.rederived, d), opts.tol.value_or(1e-8)));
    out.push_back(informational("gaussian-example: displayed constants vs determinant quadrature",
                                tag + " (informational)", c.literal, d));
  }
  return out;
}

std::vector<Report> suite_prop78(const VerifyOptions& opts) {
  CounterRng rng(opts.seed, kProp78Stream);
  Worst grid;
  for (int c = 0; c < 5; ++c) {
    auto xs = spread_values(rng, 4, -1.0, 1.0, 0.1);
    auto ys = spread_values(rng, 4, -1.0, 1.0, 0.1);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    Matrix w(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) w(i, j) = uniform(rng, 0.1, 1.0);
    const CoupledMeasure mu = CoupledMeasure::grid(xs, ys, w);
    const RhoSequence rho = c % 2 == 0 ? RhoSequence::exp_family()
                                       : RhoSequence::binomial(uniform(rng, 0.5, 2.0), 0.3);
    const RhoSequence rho_t = RhoSequence::binomial(uniform(rng, 0.5, 2.0), 0.4);
    const EigenList a(spread_values(rng, 2, -0.8, 0.8, 0.1));
    const EigenList b(spread_values(rng, 2, -0.8, 0.8, 0.1));
    const auto r = tau2_multi_int(mu, rho, rho_t, a, b);
    grid.add(r.det_route.value, *r.direct, rel(r.det_route.value, *r.direct));
  }
  const EigenList a{0.3, -0.1}, b{0.2, 0.05};
  const RhoSequence e = RhoSequence::exp_family();
  const auto r = tau2_multi_int(CoupledMeasure::gauss_pair(1.0, 1.0), e, e, a, b, false);
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const double z2 = z2_ext_det(e, e, g, g, a, b).value;
  const double scaled = superfactorial(2) * r.det_route.value;
  return {grid.report("prop78: determinant vs direct 4D sum on a coupled grid",
                      "N = 2, 5 random 4 x 4 grids, exp/binomial rho", opts.tol.value_or(1e-10)),
          single("prop78: Gaussian pair specialization vs two-matrix determinant",
                 "N = 2, sigma = 1, exp x exp; prod k! x det route", scaled, z2, rel(scaled, z2),
                 opts.tol.value_or(1e-8))};
}

using SuiteFn = std::vector<Report> (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"schur-two-route", suite_schur},
      {"cauchy-littlewood", suite_cauchy},
      {"plucker", suite_plucker},
      {"semigroup", suite_semigroup},
      {"example1-closedform", suite_example1},
      {"dethypergeom", suite_dethypergeom},
      {"andreief", suite_andreief},
      {"prop2", suite_prop2},
      {"prop3", suite_prop3},
      {"prop56", suite_prop56},
      {"hciz", suite_hciz},
      {"gaussian-example", suite_gaussian},
      {"prop78", suite_prop78},
  };
  return suites;
}

}  // namespace

std::string Report::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::ordered_json j;
  j["quantity"] = quantity;
  j["method"] = method;
  j["value"] = num(value);
  j["oracle"] = num(oracle);
  j["rel_dev"] = num(rel_dev);
  j["tolerance"] = tolerance ? num(*tolerance) : nlohmann::json(nullptr);
  j["pass"] = pass;
  return j.dump();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<Report> run_suite(const std::string& name, const VerifyOptions& opts) {
  if (name == "all") {
    std::vector<Report> out;
    for (const auto& [suite, fn] : registry()) {
      auto part = fn(opts);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  for (const auto& [suite, fn] : registry())
    if (suite == name) return fn(opts);
  throw InvalidArgument("unknown suite '" + name + "'");
}

bool all_pass(const std::vector<Report>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.pass; });
}

}  // namespace kptau
