#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "kptau/error.hpp"
#include "kptau/integrate.hpp"

using namespace kptau;
using doctest::Approx;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// integral of x^{2k} e^{-sigma x^2} over the line
double gauss_moment(int k, double sigma) {
  return std::tgamma(k + 0.5) / std::pow(sigma, k + 0.5);
}

}  // namespace

TEST_CASE("quad1d on gauss measures") {
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  CHECK(quad1d(g, [](double) { return 1.0; }).value == Approx(kSqrtPi).epsilon(1e-14));
  CHECK(quad1d(g, [](double x) { return x * x; }).value == Approx(kSqrtPi / 2).epsilon(1e-14));
  CHECK(std::abs(quad1d(g, [](double x) { return x; }).value) < 1e-15);
  const MeasureSpec g3 = MeasureSpec::gauss(3.0);
  CHECK(quad1d(g3, [](double x) { return std::cos(x); }).value ==
        Approx(std::sqrt(std::numbers::pi / 3) * std::exp(-1.0 / 12)).epsilon(1e-13));
  CHECK_THROWS_AS(MeasureSpec::gauss(0.0), InvalidArgument);
}

TEST_CASE("Gauss-Hermite exactness") {
  for (int n : {2, 5, 10, 20}) {
    const auto& rule = hermite_rule(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double q = 0.0;
      for (int k = 0; k < n; ++k) q += rule.weights[k] * std::pow(rule.nodes[k], deg);
      if (deg % 2)
        CHECK(std::abs(q) < 1e-12 * gauss_moment(deg / 2 + 1, 1.0));
      else
        CHECK(q == Approx(gauss_moment(deg / 2, 1.0)).epsilon(1e-12));
    }
  }
  for (double sigma : {0.5, 2.0}) {
    const MeasureSpec g = MeasureSpec::gauss(sigma);
    for (int k = 0; k <= 30; ++k)
      CHECK(quad1d(g, [k](double x) { return std::pow(x, 2 * k); }, 2 * k).value ==
            Approx(gauss_moment(k, sigma)).epsilon(1e-12));
  }
}

TEST_CASE("table and density measures") {
  const MeasureSpec t = MeasureSpec::table({-1.0, 0.5, 2.0}, {0.25, 1.0, 0.5});
  const auto r = quad1d(t, [](double x) { return x * x; });
  CHECK(r.value == Approx(0.25 + 0.25 + 2.0));
  CHECK(r.error_estimate == 0.0);
  CHECK_THROWS_AS(MeasureSpec::table({1.0, 0.0}, {1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(MeasureSpec::table({0.0}, {-1.0}), InvalidArgument);
  const MeasureSpec j = MeasureSpec::table_from_json(R"({"nodes":[0,1],"weights":[2,3]})");
  CHECK(quad1d(j, [](double x) { return 1.0 + x; }).value == Approx(2.0 + 6.0));

  const MeasureSpec unit = MeasureSpec::density([](double) { return 1.0; }, 0.0, 1.0, "unit");
  CHECK(quad1d(unit, [](double x) { return x * x; }).value == Approx(1.0 / 3).epsilon(1e-13));
  const MeasureSpec line = MeasureSpec::density([](double x) { return std::exp(-x * x); },
                                                -INFINITY, INFINITY, "gauss");
  CHECK(quad1d(line, [](double x) { return x * x; }).value == Approx(kSqrtPi / 2).epsilon(1e-10));
}

TEST_CASE("coupled quadrature") {
  const MeasureSpec g1 = MeasureSpec::gauss(1.0), g2 = MeasureSpec::gauss(2.0);
  // Coupled Gaussian normalization 2 pi / sqrt(4 s1 s2 - 1).
  CHECK(quad2d_coupled(g1, g2, [](double, double) { return 1.0; }).value ==
        Approx(2 * std::numbers::pi / std::sqrt(7.0)).epsilon(1e-13));
  CHECK(std::abs(quad2d_coupled(g1, g2, [](double x, double y) { return x * std::cos(y); }, false)
                     .value) < 1e-14);
  const auto f = [](double x, double y) { return std::exp(0.3 * x) * (1 + y * y) * std::cos(x); };
  const double a = quad2d_coupled(g1, g2, f).value;
  const double b = quad2d_coupled(g2, g1, [&](double x, double y) { return f(y, x); }).value;
  CHECK(a == Approx(b).epsilon(1e-10));
  CHECK_THROWS_AS(quad2d_coupled(MeasureSpec::gauss(0.4), MeasureSpec::gauss(0.4),
                                 [](double, double) { return 1.0; }),
                  DivergenceError);
  CHECK_THROWS_AS(CoupledMeasure::gauss_pair(0.5, 0.5), DivergenceError);

  // Iterated route for a table against a gauss measure.
  const MeasureSpec t = MeasureSpec::table({-0.5, 0.5}, {1.0, 1.0});
  CHECK(quad2d_coupled(t, g1, [](double, double) { return 1.0; }).value ==
        Approx(2 * kSqrtPi * std::exp(0.25 / 4)).epsilon(1e-13));
}

TEST_CASE("counter-based generator") {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
    const double u = a.uniform();
    b.uniform();
    c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(differs);
}

TEST_CASE("Haar unitaries") {
  CounterRng rng(1, 0);
  for (int n = 1; n <= 6; ++n) {
    const CMatrix u = haar_unitary(n, rng);
    CHECK((u * u.adjoint() - CMatrix::Identity(n, n)).norm() < 1e-12);
  }
  CHECK(std::abs(std::abs(haar_unitary(1, rng)(0, 0)) - 1.0) < 1e-14);
  const auto s1 = haar_unitary(3, 99, 5), s2 = haar_unitary(3, 99, 5);
  CHECK(s1.u == s2.u);
}

TEST_CASE("Haar moments") {
  for (int n : {2, 3}) {
    const auto r = mc_estimate([n](CounterRng& g) { return haar_unitary(n, g); },
                               [](const CMatrix& u) { return std::norm(u(0, 0)); }, 100000, 42);
    CHECK(std::abs(r.mean - 1.0 / n) <= 3 * r.stderr_);
  }
  // Left invariance: E[Re tr(VU)] and E[Re tr(U)] agree (both vanish).
  CMatrix v(2, 2);
  v << std::complex<double>(0, 1), 0, 0, std::complex<double>(0.6, 0.8);
  const auto plain = mc_estimate([](CounterRng& g) { return haar_unitary(2, g); },
                                 [](const CMatrix& u) { return u.trace().real(); }, 100000, 8);
  const auto moved = mc_estimate([](CounterRng& g) { return haar_unitary(2, g); },
                                 [&v](const CMatrix& u) { return (v * u).trace().real(); }, 100000,
                                 9);
  const double se = std::hypot(plain.stderr_, moved.stderr_);
  CHECK(std::abs(plain.mean - moved.mean) <= 3 * se);
  // Second moment is sensitive to a wrong phase convention: E|tr U|^2 = 1.
  const auto sq = mc_estimate([](CounterRng& g) { return haar_unitary(3, g); },
                              [](const CMatrix& u) { return std::norm(u.trace()); }, 100000, 3);
  CHECK(std::abs(sq.mean - 1.0) <= 3 * sq.stderr_);
}

TEST_CASE("Monte Carlo reductions") {
  const auto c = mc_estimate([](CounterRng&) { return 2.5; }, 1000, 1);
  CHECK(c.mean == 2.5);
  CHECK(c.stderr_ == 0.0);
  CHECK(c.samples == 1000);
  const auto r1 = mc_estimate([](CounterRng& g) { return g.normal(); }, 20000, 77);
  const auto r2 = mc_estimate([](CounterRng& g) { return g.normal(); }, 20000, 77);
  CHECK(r1.mean == r2.mean);
  CHECK(r1.stderr_ == r2.stderr_);
  CHECK(r1.stderr_ == Approx(1.0 / std::sqrt(20000.0)).epsilon(0.05));
  CHECK_THROWS_AS(mc_estimate([](CounterRng&) { return 0.0; }, 10, 1), InvalidArgument);
}
