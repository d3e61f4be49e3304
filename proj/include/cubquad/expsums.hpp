#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>

namespace cubquad {

struct SumValue {
  double re = 0;
  double im = 0;

  double magnitude() const { return std::hypot(re, im); }
  std::complex<double> value() const { return {re, im}; }
};

enum class SumKind { f, g, h };

/// One of the box sums f_i, g_j, h_k: summation over integers in
/// (theta*P/2, 2*theta*P], optionally restricted to R-smooth integers <= P.
///   f: e(cubic*a3*x^3 + quad*a2*x^2)
///   g: e(cubic*a3*x^3)
///   h: e(quad*a2*x^2)
struct BoxSumSpec {
  SumKind kind = SumKind::f;
  std::int64_t cubic = 1;
  std::int64_t quad = 1;
  double theta = 0.25;
  double P = 1;
  std::optional<std::int64_t> smooth_R;

  std::int64_t lower() const;  // first integer in the box
  std::int64_t upper() const;  // last integer in the box
  std::int64_t cubic_weight() const { return kind == SumKind::h ? 0 : cubic; }
  std::int64_t quad_weight() const { return kind == SumKind::g ? 0 : quad; }
};

namespace phase {

/// alpha mod 1 as an exact 128-bit fixed-point fraction. Every double in
/// [2^-75, 1) is represented exactly, so integer multiples wrap exactly.
unsigned __int128 to_fixed(double alpha);

/// e(phase / 2^128).
inline std::complex<double> unit(unsigned __int128 phase) {
  const auto top = static_cast<std::int64_t>(static_cast<std::uint64_t>(phase >> 64));
  const double turns = std::ldexp(static_cast<double>(top), -64);  // in [-1/2, 1/2)
  const double ang = 2.0 * std::numbers::pi * turns;
  return {std::cos(ang), std::sin(ang)};
}

inline unsigned __int128 times(unsigned __int128 fixed, __int128 k) {
  return fixed * static_cast<unsigned __int128>(k);
}

}  // namespace phase

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(std::complex<double> z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  SumValue value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

/// sum_{1<=x<=X} e(alpha x^3 + beta x^2)
SumValue weyl_sum(double alpha, double beta, std::int64_t X);

/// sum_{1<=x<=X} e(a1 x + a2 x^2 + a3 x^3)
SumValue vinogradov_sum(double a1, double a2, double a3, std::int64_t X);

/// sum_{0<|h|<=H} sum_{1<=y<=Y} e(h a1 + h y a2 + h y^2 a3); the starred
/// variant evaluates at (a1, 2 a2, 3 a3). The h <-> -h pairing makes the
/// value real.
SumValue block_sum(double a1, double a2, double a3, std::int64_t Y, std::int64_t H, bool starred = false);

SumValue box_sum(const BoxSumSpec& spec, double a2, double a3);

}  // namespace cubquad
