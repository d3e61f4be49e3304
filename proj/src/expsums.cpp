#include "cubquad/expsums.hpp"

#include "cubquad/error.hpp"
#include "cubquad/smooth.hpp"

namespace cubquad {

namespace phase {

unsigned __int128 to_fixed(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidInput("non-finite phase argument");
  double frac = alpha - std::floor(alpha);
  if (frac >= 1.0) frac = 0.0;
  if (frac == 0.0) return 0;
  int exp = 0;
  const double mant = std::frexp(frac, &exp);  // frac = mant * 2^exp, mant in [0.5, 1)
  const auto m = static_cast<unsigned __int128>(std::ldexp(mant, 53));
  const int shift = 75 + exp;  // frac * 2^128 = m * 2^(exp - 53 + 128)
  if (shift >= 0) return m << shift;
  if (shift <= -128) return 0;
  return m >> (-shift);
}

}  // namespace phase

SumValue weyl_sum(double alpha, double beta, std::int64_t X) {
  if (X < 1) throw InvalidInput("weyl_sum: X must be >= 1");
  const auto A = phase::to_fixed(alpha);
  const auto B = phase::to_fixed(beta);
  CompensatedSum acc;
  for (std::int64_t x = 1; x <= X; ++x) {
    const __int128 x2 = static_cast<__int128>(x) * x;
    acc.add(phase::unit(phase::times(A, x2 * x) + phase::times(B, x2)));
  }
  return acc.value();
}

SumValue vinogradov_sum(double a1, double a2, double a3, std::int64_t X) {
  if (X < 1) throw InvalidInput("vinogradov_sum: X must be >= 1");
  const auto A1 = phase::to_fixed(a1);
  const auto A2 = phase::to_fixed(a2);
  const auto A3 = phase::to_fixed(a3);
  CompensatedSum acc;
  for (std::int64_t x = 1; x <= X; ++x) {
    const __int128 x2 = static_cast<__int128>(x) * x;
    acc.add(phase::unit(phase::times(A1, x) + phase::times(A2, x2) + phase::times(A3, x2 * x)));
  }
  return acc.value();
}

SumValue block_sum(double a1, double a2, double a3, std::int64_t Y, std::int64_t H, bool starred) {
  if (Y < 1 || H < 1) throw InvalidInput("block_sum: Y and H must be >= 1");
  const auto A1 = phase::to_fixed(a1);
  const auto A2 = phase::to_fixed(starred ? 2.0 * a2 : a2);
  const auto A3 = phase::to_fixed(starred ? 3.0 * a3 : a3);
  CompensatedSum acc;
  for (std::int64_t h = 1; h <= H; ++h) {
    for (std::int64_t y = 1; y <= Y; ++y) {
      const __int128 hy = static_cast<__int128>(h) * y;
      const auto z = phase::unit(phase::times(A1, h) + phase::times(A2, hy) + phase::times(A3, hy * y));
      acc.add({2.0 * z.real(), 0.0});
    }
  }
  return acc.value();
}

std::int64_t BoxSumSpec::lower() const {
  return static_cast<std::int64_t>(std::floor(theta * P / 2.0)) + 1;
}

std::int64_t BoxSumSpec::upper() const { return static_cast<std::int64_t>(std::floor(2.0 * theta * P)); }

SumValue box_sum(const BoxSumSpec& spec, double a2, double a3) {
  if (!(spec.theta > 0) || !(spec.P > 0)) throw InvalidInput("box_sum: theta and P must be positive");
  if (spec.smooth_R && *spec.smooth_R < 2) throw InvalidInput("box_sum: smoothness bound must be >= 2");
  const std::int64_t lo = spec.lower();
  std::int64_t hi = spec.upper();
  if (spec.smooth_R) hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(std::floor(spec.P)));
  CompensatedSum acc;
  if (hi < lo) return acc.value();

  const auto A2 = phase::to_fixed(a2);
  const auto A3 = phase::to_fixed(a3);
  const __int128 cw = spec.cubic_weight();
  const __int128 qw = spec.quad_weight();
  std::optional<SmoothSet> smooth;
  if (spec.smooth_R) smooth = smooth_set(hi, *spec.smooth_R);
  for (std::int64_t x = lo; x <= hi; ++x) {
    if (smooth && !smooth->contains(x)) continue;
    const __int128 x2 = static_cast<__int128>(x) * x;
    acc.add(phase::unit(phase::times(A3, cw * x2 * x) + phase::times(A2, qw * x2)));
  }
  return acc.value();
}

}  // namespace cubquad
