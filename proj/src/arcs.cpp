#include "cubquad/arcs.hpp"

#include <cmath>
#include <numeric>

#include "cubquad/error.hpp"

namespace cubquad {

namespace {

template <class F>
void scan_arcs(double a2, double a3, const ArcFamily& fam, F&& visit) {
  if (!(fam.Q >= 1) || !(fam.P > 0) || fam.t < 1) throw InvalidInput("arc family needs Q >= 1, P > 0, t >= 1");
  const long double A2 = a2, A3 = a3;
  const long double w2 = static_cast<long double>(fam.Q) / fam.xi2();
  const long double w3 = static_cast<long double>(fam.Q) / fam.xi3();
  const auto qmax = static_cast<std::int64_t>(std::floor(fam.Q + 1e-12));
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const long double lq = static_cast<long double>(q);
    // |q a - r| <= w (homogeneous) or <= q w (inhomogeneous)
    const long double s2 = fam.homogeneous ? w2 : lq * w2;
    const long double s3 = fam.homogeneous ? w3 : lq * w3;
    const auto lo2 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lq * A2 - s2)));
    const auto hi2 = std::min<std::int64_t>(q, static_cast<std::int64_t>(std::floor(lq * A2 + s2)));
    const auto lo3 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(lq * A3 - s3)));
    const auto hi3 = std::min<std::int64_t>(q, static_cast<std::int64_t>(std::floor(lq * A3 + s3)));
    for (std::int64_t r2 = lo2; r2 <= hi2; ++r2) {
      if (std::fabs(lq * A2 - static_cast<long double>(r2)) > s2) continue;
      for (std::int64_t r3 = lo3; r3 <= hi3; ++r3) {
        if (std::fabs(lq * A3 - static_cast<long double>(r3)) > s3) continue;
        if (std::gcd(std::gcd(q, r2), r3) != 1) continue;
        if (!visit(ArcWitness{q, r2, r3})) return;
      }
    }
  }
}

}  // namespace

ArcMembership membership(double alpha2, double alpha3, const ArcFamily& fam) {
  ArcMembership out;
  scan_arcs(alpha2, alpha3, fam, [&](const ArcWitness& w) {
    out.inside = true;
    out.witness = w;
    return false;
  });
  return out;
}

std::vector<ArcWitness> all_witnesses(double alpha2, double alpha3, const ArcFamily& fam) {
  std::vector<ArcWitness> out;
  scan_arcs(alpha2, alpha3, fam, [&](const ArcWitness& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

RationalApproximation dirichlet_approx(double alpha, std::int64_t N) {
  if (N < 1) throw InvalidInput("dirichlet_approx: N must be >= 1");
  if (!std::isfinite(alpha) || std::fabs(alpha) > 1e15) throw InvalidInput("dirichlet_approx: alpha out of range");
  const double fl = std::floor(alpha);
  const double frac = alpha - fl;  // exact for |alpha| < 2^53
  const auto base = static_cast<std::int64_t>(fl);

  int exp = 0;
  const double mant = std::frexp(frac, &exp);
  if (frac == 0.0 || exp < -67) return {base, 1, std::fabs(frac)};
  // frac = M / 2^120 exactly
  using u128 = unsigned __int128;
  const u128 D = u128{1} << 120;
  const u128 M = static_cast<u128>(std::ldexp(mant, 53)) << (67 + exp);

  // convergents p/q of M/D; remainders r_j = |q_j M - p_j D|
  u128 r_prev = M, r_cur = D;  // r_{-2}, r_{-1}
  u128 p_prev = 0, p_cur = 1;  // p_{-2}, p_{-1}
  u128 q_prev = 1, q_cur = 0;  // q_{-2}, q_{-1}
  u128 best_p = 0, best_q = 1, best_r = M;
  while (r_cur != 0) {
    const u128 a = r_prev / r_cur;
    const u128 r_next = r_prev % r_cur;
    const u128 q_next = a * q_cur + q_prev;
    if (q_next > static_cast<u128>(N)) break;
    const u128 p_next = a * p_cur + p_prev;
    best_p = p_next;
    best_q = q_next;
    best_r = r_next;
    r_prev = r_cur;
    r_cur = r_next;
    p_prev = p_cur;
    p_cur = p_next;
    q_prev = q_cur;
    q_cur = q_next;
  }
  __int128 a_full = static_cast<__int128>(best_p) + static_cast<__int128>(base) * static_cast<__int128>(best_q);
  if (a_full > INT64_MAX || a_full < INT64_MIN) throw InvalidInput("dirichlet_approx: numerator out of range");
  return {static_cast<std::int64_t>(a_full), static_cast<std::int64_t>(best_q),
          std::ldexp(static_cast<double>(best_r), -120)};
}

double transfer_lambda(double alpha, std::int64_t b, std::int64_t r, double Z) {
  if (r < 1) throw InvalidInput("transfer_lambda: r must be positive");
  if (!(Z > 0)) throw InvalidInput("transfer_lambda: Z must be positive");
  if (std::gcd(b, r) != 1) throw InvalidInput("transfer_lambda: gcd(b, r) must be 1");
  const long double d = static_cast<long double>(r) * alpha - static_cast<long double>(b);
  return static_cast<double>(static_cast<long double>(r) + static_cast<long double>(Z) * std::fabs(d));
}

TransferReport transfer_bound_check(const std::vector<std::pair<double, double>>& samples, const TransferParams& p) {
  if (samples.empty()) throw InvalidInput("transfer_bound_check: no samples");
  if (!(p.X > 0) || !(p.Y > 0) || !(p.Z > 0) || !(p.theta >= 0))
    throw InvalidInput("transfer_bound_check: X, Y, Z must be positive and theta nonnegative");
  const auto q_max = p.q_max > 0 ? p.q_max : static_cast<std::int64_t>(std::ceil(2 * p.Z));
  const auto r_max = p.r_max > 0 ? p.r_max : static_cast<std::int64_t>(std::ceil(2 * p.Z));
  auto shape = [&](double lam) { return p.X * std::pow(1.0 / lam + 1.0 / p.Y + lam / p.Z, p.theta); };

  TransferReport rep;
  if (p.C1) {
    rep.C1 = *p.C1;
  } else {
    // hypothesis: a/q in lowest terms with |alpha - a/q| <= 1/q^2
    for (const auto& [alpha, psi] : samples) {
      for (std::int64_t q = 1; q <= q_max; ++q) {
        const auto a0 = static_cast<std::int64_t>(std::floor(static_cast<long double>(q) * alpha));
        for (std::int64_t a = a0; a <= a0 + 1; ++a) {
          if (std::gcd(a, q) != 1) continue;
          const long double gap = std::fabs(static_cast<long double>(alpha) - static_cast<long double>(a) / q);
          if (gap > 1.0L / (static_cast<long double>(q) * q)) continue;
          rep.C1 = std::max(rep.C1, psi / shape(static_cast<double>(q)));
        }
      }
    }
  }
  rep.C2 = std::pow(4.0, p.theta) * rep.C1;

  for (const auto& [alpha, psi] : samples) {
    for (std::int64_t r = 1; r <= r_max; ++r) {
      const auto b0 = static_cast<std::int64_t>(std::floor(static_cast<long double>(r) * alpha));
      for (std::int64_t b = b0; b <= b0 + 1; ++b) {
        if (std::gcd(b, r) != 1) continue;
        const double bound = shape(transfer_lambda(alpha, b, r, p.Z));
        const double k = psi / bound;
        ++rep.pairs_checked;
        if (k > rep.worst_constant) {
          rep.worst_constant = k;
          rep.worst_alpha = alpha;
          rep.worst_b = b;
          rep.worst_r = r;
        }
        if (rep.C2 > 0 && k / rep.C2 > 1.0 + 1e-12) ++rep.violations;
      }
    }
  }
  rep.worst_ratio = rep.C2 > 0 ? rep.worst_constant / rep.C2 : std::numeric_limits<double>::infinity();
  return rep;
}

WeylCheckReport minor_arc_weyl_check(const BoxSumSpec& spec, double Q, double P, std::size_t samples,
                                     std::mt19937_64& rng, double eps, double ceiling) {
  if (!(Q >= 1) || !(P > 0)) throw InvalidInput("minor_arc_weyl_check: need Q >= 1 and P > 0");
  if (Q > std::pow(P, 0.75) + 1e-9) throw InvalidInput("minor_arc_weyl_check: need Q <= P^(3/4)");
  BoxSumSpec s = spec;
  s.P = P;
  const ArcFamily fam{Q, P, std::max<std::int64_t>({1, std::abs(spec.cubic), std::abs(spec.quad)}), true};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeylCheckReport rep;
  rep.box_length = static_cast<double>(std::max<std::int64_t>(0, s.upper() - s.lower() + 1));
  const double norm = std::pow(Q, 1.0 / 3.0) / std::pow(P, 1.0 + eps);
  const std::size_t max_draws = samples * 1000 + 1000;
  std::size_t draws = 0;
  while (rep.evaluated < samples && draws < max_draws) {
    ++draws;
    const double a2 = unit(rng), a3 = unit(rng);
    if (membership(a2, a3, fam).inside) {
      ++rep.rejected;
      continue;
    }
    const double mag = box_sum(s, a2, a3).magnitude();
    rep.max_abs = std::max(rep.max_abs, mag);
    rep.max_scaled = std::max(rep.max_scaled, mag * norm);
    ++rep.evaluated;
  }
  rep.exceeds_ceiling = rep.max_scaled > ceiling;
  return rep;
}

}  // namespace cubquad
