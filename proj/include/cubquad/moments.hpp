#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubquad/bigcount.hpp"
#include "cubquad/expsums.hpp"
#include "cubquad/ledger.hpp"

namespace cubquad {

enum class CountMethod { ledger, brute_force };

std::string_view to_string(CountMethod m);

struct MomentResult {
  BigCount value = 0;
  std::vector<std::pair<std::string, std::string>> parameters;  // echo, in call order
  CountMethod method = CountMethod::ledger;
};

/// T_s(X): 2s-tuples in [1, X] with sum x^3 and sum x^2 balanced.
MomentResult moment_T(int s, std::int64_t X, const LedgerBudget& budget = {});

/// Solutions of sum(x_i^j - y_i^j) = delta_j h (j = 1, 2, 3) with |h| <= h_range.
/// With h_range >= s X the linear equation is vacuous and this equals T_s(X);
/// with h_range = 0 it is the Vinogradov count J_{s,3}(X).
MomentResult moment_T_shifted(int s, std::int64_t X, std::int64_t h_range, const LedgerBudget& budget = {});

/// I_s(Y, H) for s in {2, 3}: 2s-tuples (h_i, y_i), 0 < |h_i| <= H,
/// 1 <= y_i <= Y, with sum h_i y_i^j = 0 for j = 0, 1, 2.
MomentResult moment_I(int s, std::int64_t Y, std::int64_t H, const LedgerBudget& budget = {});

/// Solutions of sum h_i y_i^j = 0 (j = 0, 1, 2, four generators) sorted by
/// the literal class predicates; the classes may overlap or miss solutions.
struct I2Classes {
  BigCount total = 0;
  BigCount T0 = 0;  // y1 = y2 = y3 = y4
  BigCount T1 = 0;  // h3 y3^2 + h4 y4^2 = 0
  BigCount T2 = 0;  // y3 != y4 and h3 y3^2 + h4 y4^2 != 0
  BigCount identity_violations = 0;  // h1 h2 (y1-y2)^2 != h3 h4 (y3-y4)^2
};

I2Classes classify_I2(std::int64_t Y, std::int64_t H);

/// J_{s,3}(X): sum x_i^j = sum y_i^j for j = 1, 2, 3.
MomentResult moment_J(int s, std::int64_t X, const LedgerBudget& budget = {});

/// Solutions of h1 y1 + h2 y2 = h3 y3 + h4 y4, h1 + h2 = h3 + h4 with
/// 0 < |h_i| <= H, 1 <= y_i <= Y.
MomentResult count_J1(std::int64_t Y, std::int64_t H, const LedgerBudget& budget = {});

/// One factor |sum_x e(cubic a3 x^3 + quad a2 x^2)|^exponent of a mixed moment.
/// The summation runs over integers lo <= x <= hi, optionally restricted to
/// integers <= smooth_limit whose prime factors are all <= smooth_R.
struct MomentFactor {
  std::int64_t cubic = 0;
  std::int64_t quad = 0;
  std::int64_t lo = 1;
  std::int64_t hi = 0;
  std::optional<std::int64_t> smooth_R;
  int exponent = 0;

  /// Box sum f_i, g_j or h_k (smooth when spec.smooth_R is set).
  static MomentFactor box(const BoxSumSpec& spec, int exponent);
  /// The full-range sum f(alpha; X) over 1 <= x <= X.
  static MomentFactor plain(std::int64_t X, int exponent, std::int64_t cubic = 1, std::int64_t quad = 1);

  std::vector<std::int64_t> support() const;
};

/// oint prod |factor|^exponent, every exponent even, as an exact count.
MomentResult mixed_moment(const std::vector<MomentFactor>& factors, const LedgerBudget& budget = {});

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root-mean-square residual in log space
};

/// Least-squares slope of log(value) against log(scale); at least two points.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& series);

}  // namespace cubquad
