#include "cubquad/solver.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cubquad/error.hpp"
#include "cubquad/smooth.hpp"

namespace cubquad {

namespace {

struct Residual {
  double theta, phi;
  double norm() const { return std::hypot(theta, phi); }
};

Residual residual(const DiagonalSystem& sys, const std::vector<double>& t) {
  return {sys.theta(std::span<const double>(t)), sys.phi(std::span<const double>(t))};
}

// singular values of the 2 x s Jacobian of (Theta, Phi)
std::pair<double, double> jacobian_sigmas(const DiagonalSystem& sys, const std::vector<double>& t) {
  double g11 = 0, g22 = 0, g12 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double gc = 3.0 * static_cast<double>(sys.cubic_coef(i)) * t[i] * t[i];
    const double gq = 2.0 * static_cast<double>(sys.quad_coef(i)) * t[i];
    g11 += gc * gc;
    g22 += gq * gq;
    g12 += gc * gq;
  }
  const double tr = g11 + g22, det = g11 * g22 - g12 * g12;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  const double e1 = tr / 2 + disc, e2 = std::max(0.0, tr / 2 - disc);
  return {std::sqrt(e2), std::sqrt(e1)};
}

// damped minimal-norm Newton; true when the residual falls below tol
bool newton(const DiagonalSystem& sys, std::vector<double>& t, double tol) {
  const std::size_t s = t.size();
  for (int it = 0; it < 200; ++it) {
    const auto F = residual(sys, t);
    if (F.norm() < tol * 1e-3) return true;
    double g11 = 0, g22 = 0, g12 = 0;
    std::vector<double> gc(s), gq(s);
    for (std::size_t i = 0; i < s; ++i) {
      gc[i] = 3.0 * static_cast<double>(sys.cubic_coef(i)) * t[i] * t[i];
      gq[i] = 2.0 * static_cast<double>(sys.quad_coef(i)) * t[i];
      g11 += gc[i] * gc[i];
      g22 += gq[i] * gq[i];
      g12 += gc[i] * gq[i];
    }
    const double mu = 1e-14 * (g11 + g22) + 1e-300;
    const double a = g11 + mu, d = g22 + mu, det = a * d - g12 * g12;
    if (!(det > 0)) return false;
    const double y1 = (d * F.theta - g12 * F.phi) / det;
    const double y2 = (a * F.phi - g12 * F.theta) / det;
    double step_norm = 0, t_norm = 0;
    std::vector<double> step(s);
    for (std::size_t i = 0; i < s; ++i) {
      step[i] = gc[i] * y1 + gq[i] * y2;
      step_norm += step[i] * step[i];
      t_norm += t[i] * t[i];
    }
    const double damp = std::min(1.0, 0.5 * std::sqrt(t_norm / std::max(step_norm, 1e-300)));
    for (std::size_t i = 0; i < s; ++i) t[i] -= damp * step[i];
    if (!std::isfinite(t[0])) return false;
  }
  return residual(sys, t).norm() < tol;
}

std::optional<RealAnchor> normalize(const DiagonalSystem& sys, std::vector<double> t, const AnchorOptions& opts) {
  double lo = INFINITY, hi = 0;
  for (double v : t) {
    lo = std::min(lo, std::fabs(v));
    hi = std::max(hi, std::fabs(v));
  }
  if (!(hi > 0) || hi / lo > opts.upper / opts.lower) return std::nullopt;
  // homogeneity: any positive multiple of a zero is a zero
  const double target = std::clamp(0.4, opts.lower * hi / lo * 1.05, opts.upper);
  const double lam = target / hi;
  for (double& v : t) v *= lam;
  if (!newton(sys, t, opts.residual_tol)) return std::nullopt;

  RealAnchor out;
  out.flips.assign(t.size(), 1);
  out.theta.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0 && i < sys.l() + sys.m()) out.flips[i] = -1;
    out.theta[i] = std::fabs(t[i]);
    // the correction may drift back toward the trivial zero
    if (out.theta[i] < opts.lower || out.theta[i] > opts.upper) return std::nullopt;
  }
  out.normalized = sys.with_sign_flips(out.flips);
  const auto r = residual(out.normalized, out.theta);
  out.residual_theta = std::fabs(r.theta);
  out.residual_phi = std::fabs(r.phi);
  if (out.residual_theta > opts.residual_tol || out.residual_phi > opts.residual_tol) return std::nullopt;
  std::tie(out.sigma_min, out.sigma_max) = jacobian_sigmas(out.normalized, out.theta);
  out.jacobian_rank = (out.sigma_max > opts.sigma_tol ? 1 : 0) + (out.sigma_min > opts.sigma_tol ? 1 : 0);
  return out;
}

}  // namespace

std::optional<RealAnchor> find_real_anchor(const DiagonalSystem& sys, const AnchorOptions& opts) {
  const std::size_t s = sys.s();
  std::optional<RealAnchor> singular;
  auto attempt = [&](std::vector<double> t) -> std::optional<RealAnchor> {
    if (!newton(sys, t, opts.residual_tol)) return std::nullopt;
    auto a = normalize(sys, std::move(t), opts);
    if (a && !a->nonsingular() && !singular) singular = a;
    return a && a->nonsingular() ? a : std::nullopt;
  };

  if (auto a = attempt(std::vector<double>(s, 0.25))) return a;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> mag(0.05, 0.45);
  std::bernoulli_distribution sign(0.5);
  for (std::size_t k = 0; k < opts.random_starts; ++k) {
    std::vector<double> t(s);
    for (auto& v : t) v = sign(rng) ? mag(rng) : -mag(rng);
    if (auto a = attempt(std::move(t))) return a;
  }
  const int g = std::max(2, opts.grid_per_axis);
  if (std::pow(static_cast<double>(g), static_cast<double>(s)) <= 2e5) {
    std::vector<int> idx(s, 0);
    while (true) {
      std::vector<double> t(s);
      for (std::size_t i = 0; i < s; ++i) {
        const double u = -0.4 + 0.8 * (idx[i] + 0.5) / g;
        t[i] = u == 0 ? 0.1 : u;
      }
      if (auto a = attempt(std::move(t))) return a;
      std::size_t p = 0;
      while (p < s && ++idx[p] == g) idx[p++] = 0;
      if (p == s) break;
    }
  }
  return singular;
}

std::string to_string(Restriction r) {
  switch (r) {
    case Restriction::none: return "none";
    case Restriction::smooth_y: return "smooth_y";
    case Restriction::smooth_x: return "smooth_x";
  }
  return "?";
}

namespace {

using Key2 = Key<2>;

Key2 key_of(const DiagonalSystem& sys, std::size_t i, std::int64_t x) {
  const __int128 X = x;
  return {key_component(static_cast<__int128>(sys.cubic_coef(i)) * X * X * X),
          key_component(static_cast<__int128>(sys.quad_coef(i)) * X * X)};
}

BigCount count_lists(const DiagonalSystem& sys, const std::vector<std::vector<std::int64_t>>& lists,
                     const LedgerBudget& budget) {
  // group variables with identical value lists so the ledgers see multisets
  std::vector<std::vector<Key2>> vars(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    vars[i].reserve(lists[i].size());
    for (auto x : lists[i]) vars[i].push_back(key_of(sys, i, x));
  }
  std::vector<std::size_t> order(vars.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    if (vars[p].size() != vars[q].size()) return vars[p].size() < vars[q].size();
    return vars[p] < vars[q];
  });
  std::vector<std::vector<Key2>> sorted;
  sorted.reserve(vars.size());
  for (auto i : order) sorted.push_back(std::move(vars[i]));
  return count_zero_sum<2>(sorted, budget);
}

// Up to K nonzero solutions with x_i drawn from lists[i], smallest first in
// the lexicographic order of list positions. Nothing when over budget.
std::optional<std::vector<Solution>> smallest_solutions(const DiagonalSystem& sys,
                                                         const std::vector<std::vector<std::int64_t>>& lists,
                                                         std::size_t K, double left_cap, double right_cap) {
  const std::size_t s = lists.size();
  for (const auto& l : lists)
    if (l.empty()) return std::vector<Solution>{};
  std::vector<double> prefix(s + 1, 1.0);
  for (std::size_t i = 0; i < s; ++i) prefix[i + 1] = prefix[i] * static_cast<double>(lists[i].size());
  std::size_t h = s;
  double best_cost = INFINITY;
  for (std::size_t c = 0; c <= s; ++c) {
    const double left = prefix[c], right = prefix[s] / prefix[c];
    if (left > left_cap || right > right_cap) continue;
    if (left + right < best_cost) {
      best_cost = left + right;
      h = c;
    }
  }
  if (!std::isfinite(best_cost)) return std::nullopt;

  absl::flat_hash_map<Key2, std::vector<std::vector<std::uint32_t>>> left;
  auto walk = [&](std::size_t b, std::size_t e, auto&& visit) {
    std::vector<std::uint32_t> idx(e - b, 0);
    while (true) {
      __int128 th = 0, ph = 0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const __int128 x = lists[b + k][idx[k]];
        th += static_cast<__int128>(sys.cubic_coef(b + k)) * x * x * x;
        ph += static_cast<__int128>(sys.quad_coef(b + k)) * x * x;
      }
      visit(idx, th, ph);
      std::size_t p = idx.size();
      while (p > 0) {
        --p;
        if (++idx[p] < lists[b + p].size()) break;
        idx[p] = 0;
        if (p == 0) return;
      }
      if (idx.empty()) return;
    }
  };
  walk(0, h, [&](const std::vector<std::uint32_t>& idx, __int128 th, __int128 ph) {
    left[Key2{key_component(th), key_component(ph)}].push_back(idx);
  });

  std::vector<std::vector<std::uint32_t>> best;  // sorted ascending
  auto is_zero = [&](const std::vector<std::uint32_t>& full) {
    for (std::size_t i = 0; i < s; ++i)
      if (lists[i][full[i]] != 0) return false;
    return true;
  };
  walk(h, s, [&](const std::vector<std::uint32_t>& idx, __int128 th, __int128 ph) {
    auto it = left.find(Key2{key_component(-th), key_component(-ph)});
    if (it == left.end()) return;
    for (const auto& l : it->second) {
      std::vector<std::uint32_t> full = l;
      full.insert(full.end(), idx.begin(), idx.end());
      if (best.size() == K && !(full < best.back())) continue;
      if (is_zero(full)) continue;
      best.insert(std::lower_bound(best.begin(), best.end(), full), std::move(full));
      if (best.size() > K) best.pop_back();
    }
  });

  std::vector<Solution> out;
  for (const auto& full : best) {
    Solution sol(s);
    for (std::size_t i = 0; i < s; ++i) sol[i] = lists[i][full[i]];
    if (!sys.solves(sol)) throw NumericalFailure("witness failed exact verification");
    out.push_back(std::move(sol));
  }
  return out;
}

// 0, 1, -1, 2, -2, ..., B, -B
std::vector<std::int64_t> signed_range(std::int64_t B) {
  std::vector<std::int64_t> v{0};
  for (std::int64_t x = 1; x <= B; ++x) {
    v.push_back(x);
    v.push_back(-x);
  }
  return v;
}

std::int64_t height(const Solution& x) {
  std::int64_t h = 0;
  for (auto v : x) h = std::max(h, v < 0 ? -v : v);
  return h;
}

// witnesses in (height, lexicographic) order with height <= B
std::pair<std::vector<Solution>, bool> height_ordered_witnesses(const DiagonalSystem& sys, std::int64_t B,
                                                                const CountOptions& opts, std::size_t K) {
  std::vector<Solution> out;
  for (std::int64_t b = 1; b <= B && out.size() < K; ++b) {
    const std::vector<std::vector<std::int64_t>> lists(sys.s(), signed_range(b));
    // every solution of height < b was already collected
    auto found = smallest_solutions(sys, lists, K + out.size(), opts.witness_left_cap, opts.witness_right_cap);
    if (!found) return {out, false};
    for (auto& w : *found)
      if (height(w) == b && out.size() < K) out.push_back(std::move(w));
  }
  return {out, true};
}

}  // namespace

SolutionCount count_solutions(const DiagonalSystem& sys, std::int64_t B, const CountOptions& opts) {
  if (B < 0) throw InvalidInput("count_solutions: B must be nonnegative");
  SolutionCount out;
  out.style = "N";
  out.bound = static_cast<double>(B);
  const std::vector<std::vector<std::int64_t>> lists(sys.s(), signed_range(B));
  out.count = count_lists(sys, lists, opts.budget);
  std::tie(out.witnesses, out.witnesses_exhausted) = height_ordered_witnesses(sys, B, opts, opts.max_witnesses);
  return out;
}

SolutionCount count_solutions(const RealAnchor& anchor, double P, Restriction restriction, std::int64_t R,
                              const CountOptions& opts) {
  const DiagonalSystem& sys = anchor.normalized;
  if (anchor.theta.size() != sys.s()) throw InvalidInput("count_solutions: anchor of wrong length");
  if (!(P > 0)) throw InvalidInput("count_solutions: P must be positive");
  if (restriction != Restriction::none && R < 2) throw InvalidInput("count_solutions: smooth counts need R >= 2");
  if (restriction == Restriction::smooth_x && sys.l() == 0)
    throw InvalidInput("count_solutions: smooth_x needs a shared variable");

  std::optional<SmoothSet> smooth;
  if (restriction != Restriction::none)
    smooth = smooth_set(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(4 * P))), R);

  std::vector<std::vector<std::int64_t>> lists(sys.s());
  for (std::size_t i = 0; i < sys.s(); ++i) {
    const long double th = anchor.theta[i];
    const auto lo = static_cast<std::int64_t>(std::floor(th * P / 2)) + 1;
    const auto hi = static_cast<std::int64_t>(std::floor(2 * th * P));
    const bool restricted = (restriction == Restriction::smooth_y && i >= sys.l() && i < sys.l() + sys.m()) ||
                            (restriction == Restriction::smooth_x && i + 1 == sys.l());
    for (std::int64_t x = lo; x <= hi; ++x)
      if (!restricted || smooth->contains(x)) lists[i].push_back(x);
  }

  SolutionCount out;
  out.style = "R";
  out.bound = P;
  out.restriction = restriction;
  out.smooth_R = restriction == Restriction::none ? 0 : R;
  out.count = count_lists(sys, lists, opts.budget);
  auto w = smallest_solutions(sys, lists, opts.max_witnesses, opts.witness_left_cap, opts.witness_right_cap);
  out.witnesses_exhausted = w.has_value();
  if (w) out.witnesses = std::move(*w);
  return out;
}

std::optional<Solution> search_witness(const DiagonalSystem& sys, std::int64_t B, const CountOptions& opts) {
  if (B < 0) throw InvalidInput("search_witness: B must be nonnegative");
  auto [w, complete] = height_ordered_witnesses(sys, B, opts, 1);
  if (!w.empty()) return w.front();
  if (!complete) throw BudgetExceeded("search_witness: half enumeration", std::pow(2.0 * B + 1, sys.s() / 2.0),
                                      opts.witness_left_cap);
  return std::nullopt;
}

PredictionReport predict_and_compare(const RealAnchor& anchor, const DiagonalSystem& original, double P,
                                     Restriction restriction, const PredictionOptions& opts) {
  if (classify(original) == SystemClass::Unclassified)
    throw InvalidInput("predict_and_compare: no asymptotic prediction for unclassified systems (m >= 6 or n >= 4)");
  if (!anchor.nonsingular()) throw NumericalFailure("predict_and_compare: anchor is singular");
  if (restriction != Restriction::none && opts.smooth_R < 2)
    throw InvalidInput("predict_and_compare: restricted prediction needs smooth_R >= 2");

  PredictionReport rep;
  rep.P = P;
  rep.restriction = restriction;
  rep.observed = count_solutions(anchor, P, restriction, opts.smooth_R, opts.count).count;
  const auto vol = volume_constant(anchor.normalized, anchor.theta, opts.volume);
  rep.C = vol.C;
  rep.C_stderr = vol.stderr_;
  rep.series_Q = opts.series_Q;
  rep.series = singular_series(anchor.normalized, opts.series_Q).value;
  if (restriction != Restriction::none) {
    const double eta = opts.eta > 0 ? opts.eta : std::log(static_cast<double>(opts.smooth_R)) / std::log(P);
    const double c = smooth_density_constant(std::min(1.0, eta));
    rep.smooth_factor =
        restriction == Restriction::smooth_y ? std::pow(c, static_cast<double>(anchor.normalized.m())) : c;
  }
  rep.prediction = rep.smooth_factor * rep.C * rep.series * std::pow(P, static_cast<double>(original.s()) - 5.0);
  rep.ratio = rep.prediction != 0 ? to_double(rep.observed) / rep.prediction : INFINITY;
  return rep;
}

}  // namespace cubquad
