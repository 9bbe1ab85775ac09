#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kptau/convolution.hpp"
#include "kptau/error.hpp"
#include "kptau/matmodels.hpp"
#include "kptau/partition.hpp"
#include "oracles.hpp"

using namespace kptau;
using doctest::Approx;

TEST_CASE("exp family") {
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(e.rho(3) == Approx(1.0 / 6));
  CHECK(e.rho(-5) == 1.0);
  CHECK(e.ratio(4) == Approx(0.25));
  CHECK(e.ratio(0) == 1.0);
  CHECK(e.ratio(-3) == 1.0);
  CHECK(e.r_product() == 1.0);
}

TEST_CASE("binomial family") {
  const RhoSequence b = RhoSequence::binomial(2.0, 0.5);
  CHECK(b.rho(2) == Approx(0.75));
  CHECK(b.rho(-3) == 1.0);
  CHECK(b.ratio(1) == Approx(1.0));
  for (int i = 0; i <= 12; ++i) CHECK(b.rho(i) == Approx(oracle::binomial_rho(2.0, 0.5, i)));
  CHECK_THROWS_AS(RhoSequence::binomial(2.0, 1.5), DomainError);
}

TEST_CASE("c_r") {
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(c_r(e, 0) == 1.0);
  CHECK(c_r(e, 3) == Approx(0.5));
  CHECK(c_r(e, -2) == 1.0);
  const RhoSequence narrow = RhoSequence::custom(-1, {2.0, 3.0, 4.0});
  CHECK(c_r(narrow, 2) == Approx(12.0));
  CHECK(c_r(narrow, -1) == Approx(0.5));
  CHECK_THROWS_AS(c_r(narrow, 4), WindowError);
}

TEST_CASE("custom sequences reject zeros") {
  CHECK_THROWS_AS(RhoSequence::custom(-1, {1.0, 0.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(RhoSequence::custom(1, {1.0, 2.0}), WindowError);
}

TEST_CASE("r_lambda examples") {
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(r_lambda(e, Partition{2, 1}, 3) == Approx(1.0 / 48));
  CHECK(r_lambda(e, Partition{}, 4) == Approx(c_r(e, 4)));
  const RhoSequence b = RhoSequence::binomial(1.7, 0.3);
  CHECK(r_lambda(b, Partition{1}, 1) == Approx(1.7 * 0.3));
}

TEST_CASE("cell and ratio forms agree") {
  const RhoSequence fams[] = {RhoSequence::exp_family(), RhoSequence::binomial(2.5, 0.4)};
  for (const auto& rho : fams)
    for (int n = -3; n <= 5; ++n)
      for (const auto& p : enumerate_partitions(10, 10)) {
        const double cell = r_lambda(rho, p, n);
        CHECK(r_lambda_frobenius(rho, p, n) == Approx(cell).epsilon(1e-12).scale(1e-300));
      }
}

TEST_CASE("exp closed form") {
  const RhoSequence e = RhoSequence::exp_family();
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : enumerate_partitions(10, n))
      CHECK(r_lambda(e, p, n) * superfactorial(n - 1) * pochhammer_ext(n, p) ==
            Approx(1.0).epsilon(1e-12));
}

TEST_CASE("binomial closed form") {
  const double a = 1.3, zeta = 0.6;
  const RhoSequence b = RhoSequence::binomial(a, zeta);
  for (int n = 1; n <= 4; ++n)
    for (const auto& p : enumerate_partitions(8, n)) {
      double pref = 1.0;
      for (int i = 0; i < n; ++i) pref *= oracle::rising(a, i) / oracle::fact(i);
      // (x)_lambda by cells, independent of pochhammer_ext
      auto poch = [&](double x) {
        double v = 1.0;
        for (int i = 1; i <= p.length(); ++i)
          for (int j = 1; j <= p.part(i); ++j) v *= x - i + j;
        return v;
      };
      const double ref =
          pref * std::pow(zeta, p.weight() + n * (n - 1) / 2) * poch(a - 1 + n) / poch(n);
      CHECK(r_lambda(b, p, n) == Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("products") {
  const RhoSequence e = RhoSequence::exp_family();
  const RhoSequence ee = rho_product(e, e);
  CHECK(ee.rho(2) == Approx(0.25));
  CHECK(ee.family() == RhoFamily::custom);
  const RhoSequence b = RhoSequence::binomial(2.0, 0.5);
  const RhoSequence same = rho_product(b, RhoSequence::ones());
  for (int i = -10; i <= 30; ++i) CHECK(same.rho(i) == b.rho(i));
  CHECK_THROWS_AS(rho_product(RhoSequence::custom(-1, {1, 1}), RhoSequence::custom(-5, {1, 1})),
                  WindowError);
}

TEST_CASE("r_lambda is multiplicative") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  auto random_custom = [&] {
    std::vector<double> v;
    for (int i = -4; i <= 20; ++i) v.push_back(gen() % 2 ? u(gen) : -u(gen));
    return RhoSequence::custom(-4, v);
  };
  for (int c = 0; c < 20; ++c) {
    const RhoSequence r1 = c % 3 == 0 ? RhoSequence::exp_family() : random_custom();
    const RhoSequence r2 = c % 2 == 0 ? RhoSequence::binomial(1.5, 0.3) : random_custom();
    const int n = 1 + c % 4;
    for (const auto& p : enumerate_partitions(8, n))
      CHECK(r_lambda(rho_product(r2, r1), p, n) ==
            Approx(r_lambda(r2, p, n) * r_lambda(r1, p, n)).epsilon(1e-12).scale(1e-300));
  }
}

TEST_CASE("conv_action") {
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(conv_action(e, LaurentPoly{{{-1, 1.0}}}).coeffs.at(-1) == 1.0);
  CHECK(conv_action(e, LaurentPoly{{{2, 1.0}}}).coeffs.at(2) == 1.0);
  const RhoSequence b = RhoSequence::binomial(2.0, 0.5);
  CHECK(conv_action(b, LaurentPoly{{{-4, 1.0}}}).coeffs.at(-4) ==
        Approx(oracle::binomial_rho(2.0, 0.5, 3)));
  CHECK_THROWS_AS(conv_action(RhoSequence::custom(-1, {1, 1}), LaurentPoly{{{-5, 1.0}}}),
                  WindowError);
}

TEST_CASE("conv_action composes exactly for dyadic sequences") {
  std::mt19937_64 gen(9);
  auto dyadic = [&] {
    std::vector<double> v;
    for (int i = -6; i <= 10; ++i) v.push_back(std::ldexp(gen() % 2 ? 1.0 : -1.0, int(gen() % 7) - 3));
    return RhoSequence::custom(-6, v);
  };
  for (int c = 0; c < 10; ++c) {
    const RhoSequence r1 = dyadic(), r2 = dyadic();
    LaurentPoly w;
    for (int i = -10; i <= 5; ++i) w.coeffs[i] = std::sin(1.0 + i + c);
    CHECK(conv_action(rho_product(r2, r1), w) == conv_action(r2, conv_action(r1, w)));
  }
}

TEST_CASE("rho_plus") {
  const RhoSequence e = RhoSequence::exp_family();
  CHECK(rho_plus_eval(e, 1.0).value == Approx(std::numbers::e));
  CHECK(rho_plus_eval(RhoSequence::binomial(2.0, 0.5), 1.0).value == Approx(4.0));
  CHECK(rho_plus_eval(RhoSequence::binomial(2.0, 0.5), 0.0).value == 1.0);
  CHECK_THROWS_AS(rho_plus_eval(RhoSequence::binomial(2.0, 0.5), 2.0), DomainError);
  const RhoSequence c = RhoSequence::custom(-1, {1.0, 2.0, 0.5, 0.25});
  CHECK(rho_plus_eval(c, 0.0).value == 2.0);
  CHECK(rho_plus_eval(c, 0.5).value == Approx(2.0 + 0.25 + 0.0625));
}
