#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "cubquad/expsums.hpp"

using namespace cubquad;

namespace {

std::complex<double> e(double x) { return std::polar(1.0, 2 * std::numbers::pi * x); }

// naive double-precision reference for small ranges
std::complex<double> naive_weyl(double a, double b, std::int64_t X) {
  std::complex<double> acc = 0;
  for (std::int64_t x = 1; x <= X; ++x) {
    const double xd = static_cast<double>(x);
    acc += e(std::fmod(a * xd * xd * xd + b * xd * xd, 1.0));
  }
  return acc;
}

}  // namespace

TEST_CASE("weyl_sum: hand values") {
  auto v = weyl_sum(0, 0, 100);
  CHECK(v.re == doctest::Approx(100));
  CHECK(std::abs(v.im) < 1e-12);
  v = weyl_sum(1, 1, 100);
  CHECK(v.re == doctest::Approx(100));
  v = weyl_sum(0.5, 0, 4);
  CHECK(v.magnitude() < 1e-12);
}

TEST_CASE("weyl_sum: agrees with a naive sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 50; ++k) {
    const double a = U(rng), b = U(rng);
    const auto v = weyl_sum(a, b, 60);
    const auto ref = naive_weyl(a, b, 60);
    CHECK(std::abs(v.value() - ref) < 1e-9);
  }
}

TEST_CASE("weyl_sum: phase stays exact at large X") {
  // dyadic alpha, beta: reference phases reduced exactly in integers
  const std::int64_t k = 40, A = 987654321, B = 123456789;
  const double a = std::ldexp(static_cast<double>(A), -k), b = std::ldexp(static_cast<double>(B), -k);
  const std::int64_t X = 200000;
  const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << k) - 1;
  std::complex<double> ref = 0;
  for (std::int64_t x = 1; x <= X; ++x) {
    const unsigned __int128 ux = static_cast<unsigned __int128>(x);
    const unsigned __int128 ph = (ux * ux * ux * A + ux * ux * B) & mask;
    ref += e(std::ldexp(static_cast<double>(ph), -static_cast<int>(k)));
  }
  CHECK(std::abs(weyl_sum(a, b, X).value() - ref) < 1e-6);
}

TEST_CASE("periodicity and trivial bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double a1 = U(rng), a2 = U(rng), a3 = U(rng);
    CHECK(std::abs(weyl_sum(a3, a2, 37).value() - weyl_sum(a3 + 1, a2, 37).value()) < 1e-9);
    CHECK(std::abs(weyl_sum(a3, a2, 37).value() - weyl_sum(a3, a2 - 1, 37).value()) < 1e-9);
    CHECK(weyl_sum(a3, a2, 37).magnitude() <= 37 + 1e-9);
    CHECK(vinogradov_sum(a1, a2, a3, 23).magnitude() <= 23 + 1e-9);
    CHECK(std::abs(vinogradov_sum(a1 + 1, a2, a3, 23).value() - vinogradov_sum(a1, a2, a3, 23).value()) < 1e-9);
    CHECK(block_sum(a1, a2, a3, 5, 4).magnitude() <= 40 + 1e-9);
    CHECK(std::abs(block_sum(a1, a2 + 1, a3, 5, 4).value() - block_sum(a1, a2, a3, 5, 4).value()) < 1e-9);
  }
}

TEST_CASE("vinogradov_sum") {
  CHECK(vinogradov_sum(0, 0, 0, 17).re == doctest::Approx(17));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 50; ++k) {
    const double a = U(rng), b = U(rng);
    CHECK(std::abs(vinogradov_sum(0, b, a, 40).value() - weyl_sum(a, b, 40).value()) < 1e-9);
    const double dist = std::min(a, 1 - a);
    CHECK(vinogradov_sum(a, 0, 0, 40).magnitude() <= std::min(40.0, 1 / (2 * dist)) + 1e-9);
  }
}

TEST_CASE("block_sum") {
  CHECK(block_sum(0, 0, 0, 7, 3).re == doctest::Approx(42));
  for (std::int64_t H : {1, 2, 3, 4, 5}) {
    const auto v = block_sum(0.5, 0, 0, 6, H);
    CHECK(v.re == doctest::Approx(H % 2 ? -12.0 : 0.0));
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 20; ++k) {
    const double a1 = U(rng), a2 = U(rng), a3 = U(rng);
    const auto p = block_sum(a1, a2, a3, 4, 3), m = block_sum(-a1, -a2, -a3, 4, 3);
    CHECK(std::abs(p.value() - std::conj(m.value())) < 1e-9);
    const auto star = block_sum(a1, a2, a3, 4, 3, true);
    CHECK(std::abs(star.value() - block_sum(a1, 2 * a2, 3 * a3, 4, 3).value()) < 1e-9);
  }
}

TEST_CASE("box_sum") {
  BoxSumSpec h;
  h.kind = SumKind::h;
  h.theta = 0.25;
  h.P = 40;  // (5, 20]
  CHECK(h.lower() == 6);
  CHECK(h.upper() == 20);
  CHECK(box_sum(h, 0, 0.3).re == doctest::Approx(15));

  BoxSumSpec f = h, g = h;
  f.kind = SumKind::f;
  g.kind = SumKind::g;
  CHECK(box_sum(f, 0, 0).re == doctest::Approx(box_sum(g, 0.7, 0).re));

  BoxSumSpec g2;
  g2.kind = SumKind::g;
  g2.cubic = 2;
  g2.theta = 1;
  g2.P = 1;  // (0.5, 2] = {1, 2}
  CHECK(box_sum(g2, 0, 0.5).re == doctest::Approx(2));

  BoxSumSpec empty = h;
  empty.P = 1;  // theta P < 2/3
  CHECK(box_sum(empty, 0.1, 0.2).magnitude() == 0);

  BoxSumSpec sm = f;
  sm.P = 64;
  sm.smooth_R = 3;  // (8, 32] intersected with 3-smooth
  CHECK(box_sum(sm, 0, 0).re == doctest::Approx(7));  // 9 12 16 18 24 27 32
}

TEST_CASE("orthogonality spot check") {
  const std::int64_t X = 5;
  const std::int64_t K = 2 * X * X * X + 1;
  std::complex<double> acc = 0;
  for (std::int64_t k = 0; k < K; ++k) {
    const auto v = weyl_sum(static_cast<double>(k) / K, 0, X).value();
    acc += v * std::conj(v);
  }
  CHECK((acc / static_cast<double>(K)).real() == doctest::Approx(X).epsilon(1e-9));
}
