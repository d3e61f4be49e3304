#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cubquad/arcs.hpp"
#include "cubquad/error.hpp"

using namespace cubquad;

TEST_CASE("membership: origin and a constructed outside point") {
  const ArcFamily fam{5, 10, 1, true};
  const auto m = membership(0, 0, fam);
  CHECK(m.inside);
  REQUIRE(m.witness.has_value());
  CHECK(*m.witness == ArcWitness{1, 0, 0});

  const double a2 = 0.5 + fam.Q / (2 * fam.xi2()) * 3;
  const double a3 = std::sqrt(2.0) - 1;
  CHECK_FALSE(membership(a2, a3, fam).inside);
  auto inh = fam;
  inh.homogeneous = false;
  CHECK_FALSE(membership(a2, a3, inh).inside);
}

TEST_CASE("membership: exact rational points are inside") {
  const ArcFamily fam{6, 20, 1, true};
  const auto m = membership(2.0 / 5, 3.0 / 5, fam);
  CHECK(m.inside);
  CHECK(*m.witness == ArcWitness{5, 2, 3});
  CHECK_FALSE(all_witnesses(2.0 / 5, 3.0 / 5, fam).empty());
}

TEST_CASE("homogeneous and inhomogeneous agree at q = 1") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.01, 0.01);
  ArcFamily hom{1, 3, 1, true}, inh{1, 3, 1, false};
  for (int k = 0; k < 200; ++k) {
    const double a2 = U(rng), a3 = U(rng) / 10;
    CHECK(membership(a2, a3, hom).inside == membership(a2, a3, inh).inside);
  }
}

TEST_CASE("major arcs are disjoint at the standard height") {
  // widths far below the spacing 1/Q^2 of the centres
  const ArcFamily fam{4, 30, 1, true};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 2000; ++k) {
    const double a2 = U(rng), a3 = U(rng);
    CHECK(all_witnesses(a2, a3, fam).size() <= 1);
  }
}

TEST_CASE("dirichlet_approx") {
  auto r = dirichlet_approx(1.0 / 3, 10);
  CHECK(r.a == 1);
  CHECK(r.q == 3);
  r = dirichlet_approx(0.14159265358979, 10);
  CHECK(r.a == 1);
  CHECK(r.q == 7);
  CHECK(r.error == doctest::Approx(0.0088514).epsilon(1e-3));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<std::int64_t> N(1, 1000000);
  for (int k = 0; k < 10000; ++k) {
    const double a = U(rng);
    const auto n = N(rng);
    const auto d = dirichlet_approx(a, n);
    CHECK(d.q >= 1);
    CHECK(d.q <= n);
    CHECK(std::fabs(static_cast<double>(d.q) * a - static_cast<double>(d.a)) <= 1.0 / static_cast<double>(n));
  }
}

TEST_CASE("transfer_lambda") {
  CHECK(transfer_lambda(0.5, 1, 2, 100) == 2);
  CHECK(transfer_lambda(0.51, 1, 2, 100) == doctest::Approx(4));
  CHECK(transfer_lambda(0.375, 3, 8, 1e6) == 8);
  CHECK_THROWS_AS(transfer_lambda(0.5, 2, 4, 100), InvalidInput);
  CHECK_THROWS_AS(transfer_lambda(0.5, 1, 0, 100), InvalidInput);
}

TEST_CASE("transfer_bound_check: constant function with theta = 0") {
  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 20; ++k) samples.emplace_back(k / 20.0, 7.0);
  TransferParams p;
  p.X = 7;
  p.Y = 5;
  p.Z = 10;
  p.theta = 0;
  const auto rep = transfer_bound_check(samples, p);
  CHECK(rep.C1 == doctest::Approx(1));
  CHECK(rep.violations == 0);
  CHECK(rep.worst_ratio <= 1);
}

TEST_CASE("transfer_bound_check: block sums stay within C2") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0, 1);
  const double a1 = U(rng), a2 = U(rng);
  for (std::int64_t H : {4, 8})
    for (std::int64_t Y : {4, 8}) {
      std::vector<std::pair<double, double>> samples;
      for (int k = 0; k < 40; ++k) {
        const double a = U(rng);
        samples.emplace_back(a, block_sum(a1, a2, a, Y, H).magnitude());
      }
      TransferParams p;
      p.X = 2.0 * H * Y;
      p.Y = static_cast<double>(Y);
      p.Z = static_cast<double>(H * Y * Y);
      const auto rep = transfer_bound_check(samples, p);
      CHECK(std::isfinite(rep.worst_constant));
      CHECK(rep.C2 == doctest::Approx(2 * rep.C1));
      CHECK(rep.violations == 0);
    }
}

TEST_CASE("minor_arc_weyl_check") {
  BoxSumSpec spec;
  spec.P = 200;
  std::mt19937_64 rng(1);
  const auto rep = minor_arc_weyl_check(spec, 10, 200, 500, rng);
  CHECK(rep.evaluated == 500);
  CHECK(std::isfinite(rep.max_scaled));
  CHECK(rep.max_abs <= rep.box_length + 1e-9);
  std::mt19937_64 rng2(1);
  const auto one = minor_arc_weyl_check(spec, 1, 200, 300, rng2);
  CHECK(one.max_abs <= one.box_length + 1e-9);
}
