#include "cubquad/moments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cubquad/error.hpp"
#include "cubquad/smooth.hpp"

namespace cubquad {

std::string_view to_string(CountMethod m) { return m == CountMethod::ledger ? "ledger" : "brute-force"; }

namespace {

double multiset_count(double n, int k) {
  return std::exp(std::lgamma(n + k) - std::lgamma(k + 1.0) - std::lgamma(n));
}

void guard(const char* what, double estimate, const LedgerBudget& budget) {
  if (estimate > budget.max_entries) throw BudgetExceeded(what, estimate, budget.max_entries);
}

template <std::size_t D>
RepLedger<D> fold(const std::vector<Key<D>>& values, int times, const LedgerBudget& budget) {
  return RepLedger<D>::unit().power(RepLedger<D>::from_values(values), times, budget.max_entries);
}

std::string str(std::int64_t v) { return std::to_string(v); }

}  // namespace

MomentResult moment_T(int s, std::int64_t X, const LedgerBudget& budget) {
  if (s < 1 || X < 1) throw InvalidInput("moment_T: need s >= 1 and X >= 1");
  guard("moment_T ledger", multiset_count(static_cast<double>(X), s), budget);
  std::vector<Key<2>> gen;
  for (std::int64_t x = 1; x <= X; ++x) gen.push_back({key_component(static_cast<__int128>(x) * x * x), x * x});
  return {fold(gen, s, budget).self_inner(), {{"s", str(s)}, {"X", str(X)}}, CountMethod::ledger};
}

MomentResult moment_T_shifted(int s, std::int64_t X, std::int64_t h_range, const LedgerBudget& budget) {
  if (s < 1 || X < 1 || h_range < 0) throw InvalidInput("moment_T_shifted: need s, X >= 1 and h_range >= 0");
  guard("moment_T_shifted ledger", multiset_count(static_cast<double>(X), s), budget);
  std::vector<Key<3>> gen;
  for (std::int64_t x = 1; x <= X; ++x) gen.push_back({key_component(static_cast<__int128>(x) * x * x), x * x, x});
  const auto led = fold(gen, s, budget);

  // group by (cubic, quadratic); within a group count pairs with |linear gap| <= h_range
  absl::flat_hash_map<Key<2>, std::vector<std::pair<std::int64_t, std::uint64_t>>> groups;
  for (const auto& [k, c] : led.entries()) groups[{k[0], k[1]}].emplace_back(k[2], c);
  BigCount acc = 0;
  for (auto& [key, g] : groups) {
    std::sort(g.begin(), g.end());
    std::vector<BigCount> prefix(g.size() + 1, 0);
    for (std::size_t i = 0; i < g.size(); ++i) prefix[i + 1] = prefix[i] + g[i].second;
    for (const auto& [lin, c] : g) {
      auto lo = std::lower_bound(g.begin(), g.end(), std::pair<std::int64_t, std::uint64_t>{lin - h_range, 0});
      auto hi = std::upper_bound(g.begin(), g.end(),
                                 std::pair<std::int64_t, std::uint64_t>{lin + h_range, UINT64_MAX});
      const BigCount window = prefix[hi - g.begin()] - prefix[lo - g.begin()];
      acc = checked_add(acc, checked_mul(c, window));
    }
  }
  return {acc, {{"s", str(s)}, {"X", str(X)}, {"h_range", str(h_range)}}, CountMethod::ledger};
}

MomentResult moment_I(int s, std::int64_t Y, std::int64_t H, const LedgerBudget& budget) {
  if (s != 2 && s != 3) throw InvalidInput("moment_I: s must be 2 or 3");
  if (Y < 1 || H < 1) throw InvalidInput("moment_I: need Y, H >= 1");
  guard("moment_I ledger", multiset_count(2.0 * static_cast<double>(H * Y), s), budget);
  std::vector<Key<3>> gen;
  for (std::int64_t h = -H; h <= H; ++h) {
    if (h == 0) continue;
    for (std::int64_t y = 1; y <= Y; ++y) gen.push_back({h, h * y, h * y * y});
  }
  const auto led = fold(gen, s, budget);
  return {led.match_negated(led), {{"s", str(s)}, {"Y", str(Y)}, {"H", str(H)}}, CountMethod::ledger};
}

I2Classes classify_I2(std::int64_t Y, std::int64_t H) {
  if (Y < 1 || H < 1) throw InvalidInput("classify_I2: need Y, H >= 1");
  if (std::pow(2.0 * static_cast<double>(H * Y), 3) > 1e9) throw BudgetExceeded("classify_I2 enumeration", std::pow(2.0 * H * Y, 3), 1e9);
  std::vector<std::pair<std::int64_t, std::int64_t>> gens;
  for (std::int64_t h = -H; h <= H; ++h)
    if (h != 0)
      for (std::int64_t y = 1; y <= Y; ++y) gens.emplace_back(h, y);

  I2Classes out;
  for (auto [h1, y1] : gens)
    for (auto [h2, y2] : gens)
      for (auto [h3, y3] : gens) {
        // the first two equations determine h4 and h4*y4
        const std::int64_t h4 = -(h1 + h2 + h3);
        if (h4 == 0 || std::abs(h4) > H) continue;
        const std::int64_t lin = -(h1 * y1 + h2 * y2 + h3 * y3);
        if (lin % h4 != 0) continue;
        const std::int64_t y4 = lin / h4;
        if (y4 < 1 || y4 > Y) continue;
        if (h1 * y1 * y1 + h2 * y2 * y2 + h3 * y3 * y3 + h4 * y4 * y4 != 0) continue;
        ++out.total;
        const std::int64_t q34 = h3 * y3 * y3 + h4 * y4 * y4;
        if (y1 == y2 && y2 == y3 && y3 == y4) ++out.T0;
        if (q34 == 0) ++out.T1;
        if (y3 != y4 && q34 != 0) ++out.T2;
        if (h1 * h2 * (y1 - y2) * (y1 - y2) != h3 * h4 * (y3 - y4) * (y3 - y4)) ++out.identity_violations;
      }
  return out;
}

MomentResult moment_J(int s, std::int64_t X, const LedgerBudget& budget) {
  if (s < 1 || X < 1) throw InvalidInput("moment_J: need s >= 1 and X >= 1");
  guard("moment_J ledger", multiset_count(static_cast<double>(X), s), budget);
  std::vector<Key<3>> gen;
  for (std::int64_t x = 1; x <= X; ++x) gen.push_back({x, x * x, key_component(static_cast<__int128>(x) * x * x)});
  return {fold(gen, s, budget).self_inner(), {{"s", str(s)}, {"X", str(X)}}, CountMethod::ledger};
}

MomentResult count_J1(std::int64_t Y, std::int64_t H, const LedgerBudget& budget) {
  if (Y < 1 || H < 1) throw InvalidInput("count_J1: need Y, H >= 1");
  guard("count_J1 ledger", multiset_count(2.0 * static_cast<double>(H * Y), 2), budget);
  std::vector<Key<2>> gen;
  for (std::int64_t h = -H; h <= H; ++h) {
    if (h == 0) continue;
    for (std::int64_t y = 1; y <= Y; ++y) gen.push_back({h, h * y});
  }
  return {fold(gen, 2, budget).self_inner(), {{"Y", str(Y)}, {"H", str(H)}}, CountMethod::ledger};
}

MomentFactor MomentFactor::box(const BoxSumSpec& spec, int exponent) {
  if (!(spec.theta > 0) || !(spec.P > 0)) throw InvalidInput("moment factor: theta and P must be positive");
  MomentFactor f;
  f.cubic = spec.cubic_weight();
  f.quad = spec.quad_weight();
  f.lo = spec.lower();
  f.hi = spec.upper();
  if (spec.smooth_R) {
    if (*spec.smooth_R < 2) throw InvalidInput("moment factor: smoothness bound must be >= 2");
    f.smooth_R = spec.smooth_R;
    f.hi = std::min<std::int64_t>(f.hi, static_cast<std::int64_t>(std::floor(spec.P)));
  }
  f.exponent = exponent;
  return f;
}

MomentFactor MomentFactor::plain(std::int64_t X, int exponent, std::int64_t cubic, std::int64_t quad) {
  if (X < 1) throw InvalidInput("moment factor: X must be >= 1");
  MomentFactor f;
  f.cubic = cubic;
  f.quad = quad;
  f.lo = 1;
  f.hi = X;
  f.exponent = exponent;
  return f;
}

std::vector<std::int64_t> MomentFactor::support() const {
  std::vector<std::int64_t> xs;
  if (hi < lo) return xs;
  if (smooth_R) {
    const auto set = smooth_set(hi, *smooth_R);
    for (auto x : set.members)
      if (x >= lo) xs.push_back(x);
  } else {
    for (std::int64_t x = lo; x <= hi; ++x) xs.push_back(x);
  }
  return xs;
}

MomentResult mixed_moment(const std::vector<MomentFactor>& factors, const LedgerBudget& budget) {
  double estimate = 1;
  std::vector<std::pair<std::vector<Key<2>>, int>> halves;
  std::vector<std::pair<std::string, std::string>> params;
  for (const auto& f : factors) {
    if (f.exponent < 0 || f.exponent % 2 != 0)
      throw InvalidInput("mixed_moment: exponent " + std::to_string(f.exponent) + " is not a nonnegative even integer");
    params.emplace_back("factor", "cubic=" + str(f.cubic) + " quad=" + str(f.quad) + " range=(" + str(f.lo) + "," +
                                      str(f.hi) + ") exp=" + std::to_string(f.exponent) +
                                      (f.smooth_R ? " R=" + str(*f.smooth_R) : ""));
    if (f.exponent == 0) continue;
    std::vector<Key<2>> gen;
    for (auto x : f.support())
      gen.push_back({key_component(static_cast<__int128>(f.cubic) * x * x * x),
                     key_component(static_cast<__int128>(f.quad) * x * x)});
    if (gen.empty()) return {0, params, CountMethod::ledger};
    estimate *= multiset_count(static_cast<double>(gen.size()), f.exponent / 2);
    halves.emplace_back(std::move(gen), f.exponent / 2);
  }
  guard("mixed_moment ledger", estimate, budget);
  auto led = RepLedger<2>::unit();
  for (const auto& [gen, e] : halves) led = led.power(RepLedger<2>::from_values(gen), e, budget.max_entries);
  return {led.self_inner(), params, CountMethod::ledger};
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 2) throw InvalidInput("fit_exponent: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(series.size());
  for (const auto& [scale, value] : series) {
    if (!(scale > 0)) throw InvalidInput("fit_exponent: scales must be positive");
    if (!(value > 0)) throw InvalidInput("fit_exponent: values must be positive");
    const double x = std::log(scale), y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw InvalidInput("fit_exponent: scales must not all coincide");
  ExponentFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (const auto& [scale, value] : series) {
    const double r = std::log(value) - (fit.intercept + fit.slope * std::log(scale));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace cubquad
