#include <cmath>
#include <set>

#include "doctest.h"
#include "kptau/convolution.hpp"
#include "kptau/error.hpp"
#include "kptau/matmodels.hpp"
#include "kptau/partition.hpp"
#include "kptau/symfunc.hpp"
#include "oracles.hpp"

using namespace kptau;

namespace {

std::vector<std::vector<int>> as_lists(const std::vector<Partition>& ps) {
  std::vector<std::vector<int>> out;
  for (const auto& p : ps) out.emplace_back(p.parts().begin(), p.parts().end());
  return out;
}

}  // namespace

TEST_CASE("enumeration lists") {
  CHECK(as_lists(enumerate_partitions(0, 5)) == std::vector<std::vector<int>>{{}});
  CHECK(as_lists(enumerate_partitions(3, 2)) ==
        std::vector<std::vector<int>>{{}, {1}, {2}, {1, 1}, {3}, {2, 1}});
  CHECK(as_lists(enumerate_partitions(4, 1)) ==
        std::vector<std::vector<int>>{{}, {1}, {2}, {3}, {4}});
  CHECK_THROWS_AS(enumerate_partitions(41, 3), CapacityError);
}

TEST_CASE("enumeration matches a recursive generator") {
  for (int w = 0; w <= 15; ++w)
    for (int l = 0; l <= w; ++l) {
      std::set<std::vector<int>> expected;
      for (int k = 0; k <= w; ++k)
        for (auto& p : oracle::partitions_of(k, l)) expected.insert(p);
      const auto got = as_lists(enumerate_partitions(w, l));
      CHECK(got.size() == expected.size());
      CHECK(std::set<std::vector<int>>(got.begin(), got.end()) == expected);
    }
}

TEST_CASE("enumeration order is graded") {
  const auto ps = enumerate_partitions(12, 4);
  for (std::size_t i = 1; i < ps.size(); ++i) {
    CHECK(ps[i - 1].weight() <= ps[i].weight());
    CHECK(GradedLess{}(ps[i - 1], ps[i]));
  }
}

TEST_CASE("text syntax") {
  CHECK(Partition::parse("2,1") == Partition{2, 1});
  CHECK(Partition::parse("()").length() == 0);
  CHECK(Partition{3, 1, 1}.to_string() == "3,1,1");
  CHECK_THROWS_AS(Partition::parse("1,2"), InvalidArgument);
  CHECK_THROWS_AS(Partition::parse("2,x"), InvalidArgument);
  CHECK_THROWS_AS((Partition{1, 2}), InvalidArgument);
}

TEST_CASE("frobenius coordinates") {
  CHECK(to_frobenius(Partition{}).rank() == 0);
  const auto f = to_frobenius(Partition{3, 3, 1});
  CHECK(f.alpha == std::vector<int>{2, 1});
  CHECK(f.beta == std::vector<int>{2, 0});
  const auto one = to_frobenius(Partition{1});
  CHECK(one.alpha == std::vector<int>{0});
  CHECK(one.beta == std::vector<int>{0});
  for (const auto& p : enumerate_partitions(12, 12)) CHECK(from_frobenius(to_frobenius(p)) == p);
}

TEST_CASE("conjugate") {
  CHECK(conjugate(Partition{3, 1}) == Partition{2, 1, 1});
  CHECK(conjugate(Partition{}) == Partition{});
  CHECK(conjugate(Partition{2, 2}) == Partition{2, 2});
  for (const auto& p : enumerate_partitions(10, 10)) CHECK(conjugate(conjugate(p)) == p);
}

TEST_CASE("pochhammer and dimension examples") {
  CHECK(pochhammer_ext(3, Partition{2, 1}) == 24.0);
  CHECK(pochhammer_ext(5, Partition{}) == 1.0);
  CHECK(pochhammer_ext(1, Partition{1, 1}) == 0.0);
  CHECK(dimension_glN(Partition{2}, 2) == doctest::Approx(3.0));
  CHECK(dimension_glN(Partition{}, 4) == 1.0);
  CHECK(dimension_glN(Partition{1}, 3) == doctest::Approx(3.0));
  CHECK(dimension_glN(Partition{1, 1, 1}, 2) == 0.0);
}

TEST_CASE("hook lengths count standard tableaux") {
  // sum over |lambda| = n of (n! / prod hooks)^2 = n!
  for (int n = 1; n <= 8; ++n) {
    double total = 0.0;
    for (const auto& parts : oracle::partitions_of(n, n)) {
      const Partition p(parts);
      double hooks = 1.0;
      for (int i = 1; i <= p.length(); ++i)
        for (int j = 1; j <= p.part(i); ++j) hooks *= hook_length(p, i, j);
      const double f = oracle::fact(n) / hooks;
      total += f * f;
    }
    CHECK(total == doctest::Approx(oracle::fact(n)).epsilon(1e-12));
  }
}

TEST_CASE("pochhammer matches the ratio form of r_lambda for exp") {
  const RhoSequence e = RhoSequence::exp_family();
  for (int n = 1; n <= 6; ++n)
    for (const auto& p : enumerate_partitions(10, n)) {
      const double v = r_lambda_frobenius(e, p, n) * superfactorial(n - 1) * pochhammer_ext(n, p);
      CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dimension equals Schur at the identity") {
  for (int n = 1; n <= 5; ++n) {
    const EigenList ones(std::vector<double>(static_cast<std::size_t>(n), 1.0));
    for (const auto& p : enumerate_partitions(10, 10)) {
      const double jt = schur_jt(p, miwa(ones, 10));
      CHECK(dimension_glN(p, n) == doctest::Approx(jt).epsilon(1e-10).scale(1.0));
    }
  }
}
