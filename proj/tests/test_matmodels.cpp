#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kptau/error.hpp"
#include "kptau/matmodels.hpp"
#include "oracles.hpp"

using namespace kptau;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

}  // namespace

TEST_CASE("moments and the Hankel matrix") {
  const MomentMatrix mm = moments(MeasureSpec::gauss(1.0), 6);
  CHECK(mm.degree() == 6);
  CHECK(mm.moment(0) == Approx(kSqrtPi));
  CHECK(mm.moment(2) == Approx(kSqrtPi / 2));
  CHECK(std::abs(mm.moment(3)) < 1e-15);
  CHECK(mm.moment(8) == Approx(std::tgamma(4.5)));
  const Matrix h = mm.hankel();
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) CHECK(h(i, j) == mm.moment(i + j));
  CHECK_THROWS_AS(mm.moment(13), WindowError);
  CHECK_THROWS_AS(moments(MeasureSpec::gauss(1.0), 41), CapacityError);
}

TEST_CASE("pi from moments") {
  const MomentMatrix mm = moments(MeasureSpec::gauss(1.0), 10);
  CHECK(pi_from_moments(mm, Partition{}, 1) == Approx(kSqrtPi));
  CHECK(std::abs(pi_from_moments(mm, Partition{1}, 1)) < 1e-15);
  // N = 2 vacuum: the integral of (x - y)^2 e^{-x^2 - y^2} is pi.
  CHECK(pi_from_moments(mm, Partition{}, 2) == Approx(kPi));
  CHECK(pi_from_moments(mm, Partition{1, 1, 1}, 2) == 0.0);
}

TEST_CASE("pi equals the eigenvalue integral with a Schur insertion") {
  // pi(lambda) = integral of Delta(x)^2 s_lambda(x) against the product measure.
  const MeasureSpec t = MeasureSpec::table({-1.0, -0.2, 0.4, 1.3}, {0.3, 0.9, 0.5, 0.2});
  const MomentMatrix mm = moments(t, 8);
  const auto& x = t.nodes();
  const auto& w = t.weights();
  for (const auto& p : enumerate_partitions(4, 2)) {
    const std::vector<int> parts(p.parts().begin(), p.parts().end());
    double direct = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (i == j) continue;
        const double d = x[i] - x[j];
        direct += w[i] * w[j] * d * d * oracle::schur_bialternant(parts, {x[i], x[j]});
      }
    CHECK(pi_from_moments(mm, p, 2) == Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("one-matrix series") {
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const MomentMatrix mm = moments(g, 20);
  CHECK(z_n_series(mm, 2, FlowVector{0.0}, 10) == Approx(pi_from_moments(mm, Partition{}, 2)));
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(z_n_ext_series(e, mm, 3, EigenList{0, 0, 0}, 10) ==
        Approx(c_r(e, 3) * pi_from_moments(mm, Partition{}, 3)));
  // The vacuum value times Z_N(t) agrees with its eigenvalue quadrature.
  const FlowVector t{0.1, -0.05};
  CHECK(z_n_series(mm, 2, t, 18) == Approx(z_n_quadrature(g, 2, t).value).epsilon(1e-8));
  const MomentMatrix tau_src = moments(g, 8);
  const TauSeries tau = moment_tau(tau_src, 2, 6);
  CHECK(tau.provenance() == Provenance::moments);
  CHECK(tau.coeff(Partition{2}) == Approx(pi_from_moments(tau_src, Partition{2}, 2)));
}

TEST_CASE("one-matrix determinant") {
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const RhoSequence e = RhoSequence::exp_family();
  const double a = 0.7;
  CHECK(z_n_rho_det(e, g, EigenList{a}).value == Approx(kSqrtPi * std::exp(a * a / 4)));
  const RhoSequence delta = RhoSequence::custom(-1, {1.0, 1.0});
  CHECK(z_n_rho_det(delta, g, EigenList{a}).value == Approx(kSqrtPi));
  const MomentMatrix mm = moments(g, 22);
  const EigenList a2{0.4, 0.1};
  CHECK(z_n_rho_det(e, g, a2).value == Approx(z_n_ext_series(e, mm, 2, a2, 20)).epsilon(1e-8));
  // Gaussian closed form at N = 2 with the Vandermonde prefactor.
  CHECK(superfactorial(1) * z_n_ext_series(e, mm, 2, a2, 20) ==
        Approx(kPi * std::exp((0.16 + 0.01) / 4)).epsilon(1e-8));
}

TEST_CASE("exponential trace expansion") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int c = 0; c < 5; ++c) {
    Matrix a(2, 2), x(2, 2);
    a << u(gen), u(gen), u(gen), u(gen);
    x << u(gen), u(gen), u(gen), u(gen);
    CHECK(trace_exp_series(a, x, 16) == Approx(std::exp((a * x).trace())).epsilon(1e-8));
  }
}

TEST_CASE("HCIZ Monte Carlo") {
  const McCheck one = hciz_check(EigenList{0.4}, EigenList{-1.2}, 1000, 1);
  CHECK(one.lhs == Approx(std::exp(-0.48)));
  CHECK(one.z == 0.0);
  const McCheck two = hciz_check(EigenList{1.0, 0.2}, EigenList{0.7, -0.3}, 100000, 42);
  CHECK(std::abs(two.z) <= 3.0);
  const McCheck three = hciz_check(EigenList{0.5, 0.1, -0.4}, EigenList{0.3, -0.2, 0.6}, 50000, 4);
  CHECK(std::abs(three.z) <= 3.0);
  const McCheck ch = character_check(Partition{2, 1}, EigenList{1.0, 0.2}, EigenList{0.7, -0.3},
                                     100000, 43);
  CHECK(std::abs(ch.z) <= 3.0);
}

TEST_CASE("bimoments") {
  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const BimomentMatrix bm = bimoments(g, g, 6);
  CHECK(bm(0, 0) == Approx(2 * kPi / std::sqrt(3.0)));
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 6; ++j) CHECK(std::abs(bm(i, j) - bm(j, i)) <= 1e-13 * bm.matrix().norm());
  CHECK_THROWS_AS(bm(7, 0), WindowError);
  CHECK_THROWS_AS(bimoments(MeasureSpec::gauss(0.4), MeasureSpec::gauss(0.4), 2), DivergenceError);
  CHECK(b_from_bimoments(bm, Partition{}, Partition{}, 1) == Approx(bm(0, 0)));
  CHECK(b_from_bimoments(bm, Partition{1}, Partition{}, 1) == Approx(bm(1, 0)));
  // Direct 2 x 2 case: 2! 1! 2! det(B_{lambda_i - i + 2, mu_j - j + 2}).
  const double direct = 4.0 * (bm(1, 1) * bm(0, 0) - bm(1, 0) * bm(0, 1));
  CHECK(b_from_bimoments(bm, Partition{}, Partition{}, 2) == Approx(direct));
}

TEST_CASE("two-matrix model") {
  const MeasureSpec s = MeasureSpec::table({0.6}, {1.0});
  const MeasureSpec u = MeasureSpec::table({-0.8}, {1.0});
  const RhoSequence e = RhoSequence::exp_family();
  const double a = 0.3, b = 0.2;
  CHECK(z2_ext_det(e, e, s, u, EigenList{a}, EigenList{b}).value ==
        Approx(std::exp(0.6 * -0.8) * std::exp(a * 0.6) * std::exp(b * -0.8)));

  const MeasureSpec g = MeasureSpec::gauss(1.0);
  const double oracle = quad2d_coupled(g, g, [&](double x, double y) {
                          return std::exp(a * x + b * y);
                        }).value;
  CHECK(z2_ext_det(e, e, g, g, EigenList{a}, EigenList{b}).value == Approx(oracle).epsilon(1e-8));
  CHECK(z2_gaussian_closed(1.0, EigenList{a}, EigenList{b}).rederived ==
        Approx(oracle).epsilon(1e-8));

  const BimomentMatrix bm = bimoments(g, g, 16);
  CHECK(z2_ext_series(e, e, bm, 2, EigenList{0, 0}, EigenList{0, 0}, 10) ==
        Approx(c_r(e, 2) * c_r(e, 2) * b_from_bimoments(bm, Partition{}, Partition{}, 2)));
  const RhoSequence one = RhoSequence::ones();
  const EigenList a2{0.2, -0.1}, b2{0.15, 0.05};
  const double via_tau =
      eval_2kp(bimoment_tau(bm, 2, 12), miwa(a2, 12), miwa(b2, 12)).value;
  CHECK(z2_ext_series(one, one, bm, 2, a2, b2, 12) == Approx(via_tau).epsilon(1e-12));
  CHECK(z2_ext_series(e, e, bm, 2, a2, b2, 14) ==
        Approx(z2_ext_det(e, e, g, g, a2, b2).value).epsilon(1e-6));
}

TEST_CASE("multi-integral routes") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix w(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) w(i, j) = u(gen);
  const CoupledMeasure mu = CoupledMeasure::grid({-0.7, 0.1, 0.9}, {-0.5, 0.0, 0.4, 1.1}, w);
  const RhoSequence e = RhoSequence::exp_family();
  const RhoSequence b = RhoSequence::binomial(1.5, 0.3);
  const auto r = tau2_multi_int(mu, e, b, EigenList{0.3, -0.4}, EigenList{0.5, 0.2});
  REQUIRE(r.direct.has_value());
  CHECK(r.det_route.value == Approx(*r.direct).epsilon(1e-10));
  const auto r1 = tau2_multi_int(mu, e, b, EigenList{0.3}, EigenList{0.5});
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      sum += w(i, j) * std::exp(0.3 * mu.xs()[i]) * std::pow(1 - 0.3 * 0.5 * mu.ys()[j], -1.5);
  CHECK(r1.det_route.value == Approx(sum).epsilon(1e-12));
  CHECK_THROWS_AS(tau2_multi_int(mu, e, b, EigenList{0.1, 0.2, 0.3}, EigenList{0.1, 0.2, 0.3}),
                  CapacityError);
}

TEST_CASE("Andreief identity") {
  const MeasureSpec t = MeasureSpec::table({-1.0, -0.3, 0.2, 0.8, 1.5}, {0.4, 1.0, 0.7, 0.2, 0.9});
  const BasisFunction phi = [](int i, double x) { return std::pow(x, i) + 0.1 * i; };
  const BasisFunction psi = [](int i, double x) { return std::cos((i + 1) * x); };
  for (int n = 1; n <= 3; ++n)
    CHECK(andreief_lhs(t, n, phi, psi) == Approx(andreief_rhs(t, n, phi, psi)).epsilon(1e-12));
}

TEST_CASE("small helpers") {
  Matrix m(3, 3);
  m << 2, -1, 0.5, 1, 3, -2, 0, 4, 1;
  CHECK(leibniz_det(m) == Approx(det(m)).epsilon(1e-14));
  CHECK(factorial(5) == 120.0);
  CHECK(superfactorial(3) == 12.0);
  CHECK(superfactorial(0) == 1.0);
}
