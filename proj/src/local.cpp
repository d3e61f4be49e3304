#include "cubquad/local.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "cubquad/error.hpp"

namespace cubquad {

namespace {

std::int64_t mod(__int128 v, std::int64_t q) {
  auto r = static_cast<std::int64_t>(v % q);
  return r < 0 ? r + q : r;
}

std::int64_t ipow(std::int64_t p, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i)
    if (__builtin_mul_overflow(r, p, &r)) throw InvalidInput("prime power out of range");
  return r;
}

// p^e, saturating at the top of the 128-bit range
BigCount sat_pow(std::int64_t p, int e) {
  BigCount r = 1;
  for (int i = 0; i < e; ++i) {
    BigCount n;
    if (__builtin_mul_overflow(r, static_cast<BigCount>(p), &n)) return ~BigCount{0};
    r = n;
  }
  return r;
}

// prime factorization as (p, p^k) pairs
std::vector<std::pair<std::int64_t, std::int64_t>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    std::int64_t pk = 1;
    while (n % p == 0) {
      n /= p;
      pk *= p;
    }
    out.emplace_back(p, pk);
  }
  if (n > 1) out.emplace_back(n, n);
  return out;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= n; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

RootTable::RootTable(std::int64_t q) : q_(q) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  roots_.resize(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q);
    roots_[k] = {std::cos(ang), std::sin(ang)};
  }
}

CompleteSumTable::CompleteSumTable(std::int64_t q) : q_(q) {
  if (q < 1) throw InvalidInput("modulus must be positive");
  if (static_cast<double>(q) * q * q > 4e9) throw BudgetExceeded("complete-sum table", static_cast<double>(q) * q * q, 4e9);
  const RootTable roots(q);
  const std::int64_t half = q / 2;
  values_.resize(static_cast<std::size_t>((half + 1) * q));
  std::vector<std::int64_t> c3(q), c2(q), idx(q);
  for (std::int64_t u = 0; u < q; ++u) {
    c2[u] = mod(static_cast<__int128>(u) * u, q);
    c3[u] = mod(static_cast<__int128>(u) * u * u, q);
  }
  for (std::int64_t A = 0; A <= half; ++A) {
    for (std::int64_t u = 0; u < q; ++u) idx[u] = mod(static_cast<__int128>(A) * c3[u], q);
    for (std::int64_t B = 0; B < q; ++B) {
      double re = 0, im = 0;
      for (std::int64_t u = 0; u < q; ++u) {
        const auto& z = roots[idx[u]];
        re += z.real();
        im += z.imag();
        idx[u] += c2[u];
        if (idx[u] >= q) idx[u] -= q;
      }
      values_[static_cast<std::size_t>(A * q + B)] = {re, im};
    }
  }
}

std::complex<double> CompleteSumTable::operator()(std::int64_t A, std::int64_t B) const {
  A = mod(A, q_);
  B = mod(B, q_);
  if (A > q_ / 2) A = q_ - A;
  return values_[static_cast<std::size_t>(A * q_ + B)];
}

CompleteSum complete_sum(SumKind kind, std::int64_t q, std::int64_t r2, std::int64_t r3, std::int64_t cubic,
                         std::int64_t quad) {
  if (q < 1) throw InvalidInput("complete_sum: q must be positive");
  const RootTable roots(q);
  const std::int64_t A = kind == SumKind::h ? 0 : mod(static_cast<__int128>(cubic) * r3, q);
  const std::int64_t B = kind == SumKind::g ? 0 : mod(static_cast<__int128>(quad) * r2, q);
  CompensatedSum acc;
  for (std::int64_t u = 1; u <= q; ++u) {
    const __int128 u2 = static_cast<__int128>(u) * u;
    acc.add(roots[mod(A * u2 % q * u + B * u2, q)]);
  }
  return {kind, q, mod(r2, q), mod(r3, q), acc.value().value()};
}

std::complex<double> t_factor(const DiagonalSystem& sys, std::int64_t q, std::int64_t r2, std::int64_t r3) {
  if (q < 1) throw InvalidInput("t_factor: q must be positive");
  if (std::gcd(std::gcd(q, mod(r2, q)), mod(r3, q)) != 1) throw InvalidInput("t_factor: (q, r2, r3) must be coprime");
  std::complex<double> prod{1, 0};
  const double inv = 1.0 / static_cast<double>(q);
  for (std::size_t i = 0; i < sys.s(); ++i) {
    const SumKind kind = sys.quad_coef(i) == 0 ? SumKind::g : sys.cubic_coef(i) == 0 ? SumKind::h : SumKind::f;
    prod *= complete_sum(kind, q, r2, r3, sys.cubic_coef(i), sys.quad_coef(i)).value * inv;
  }
  return prod;
}

LocalSums local_sums(const DiagonalSystem& sys, std::int64_t q) {
  if (q < 1) throw InvalidInput("local_sums: q must be positive");
  if (q == 1) return {1.0, {1.0, 0.0}};
  const CompleteSumTable table(q);
  const std::size_t s = sys.s();
  std::vector<std::int64_t> cub(s), qua(s);
  for (std::size_t i = 0; i < s; ++i) {
    cub[i] = mod(sys.cubic_coef(i), q);
    qua[i] = mod(sys.quad_coef(i), q);
  }
  const double inv = 1.0 / static_cast<double>(q);
  LocalSums out;
  for (std::int64_t r2 = 1; r2 <= q; ++r2) {
    const std::int64_t g2 = std::gcd(q, r2);
    for (std::int64_t r3 = 1; r3 <= q; ++r3) {
      if (std::gcd(g2, r3) != 1) continue;
      std::complex<double> T{1, 0};
      for (std::size_t i = 0; i < s; ++i) T *= table(cub[i] * r3, qua[i] * r2) * inv;
      out.A += std::abs(T);
      out.B += T;
    }
  }
  return out;
}

SingularSeriesReport singular_series(const DiagonalSystem& sys, std::int64_t Q, SeriesMode mode, std::int64_t cap) {
  if (Q < 1) throw InvalidInput("singular_series: Q must be >= 1");
  if (Q > cap) throw BudgetExceeded("singular_series height", static_cast<double>(Q), static_cast<double>(cap));
  SingularSeriesReport rep;
  rep.Q = Q;
  rep.mode = mode;
  rep.A.assign(Q + 1, 0.0);
  rep.B.assign(Q + 1, 0.0);
  rep.B_imag.assign(Q + 1, 0.0);
  rep.partial.assign(Q + 1, 0.0);

  if (mode == SeriesMode::direct) {
    for (std::int64_t q = 1; q <= Q; ++q) {
      const auto ls = local_sums(sys, q);
      rep.A[q] = ls.A;
      rep.B[q] = ls.B.real();
      rep.B_imag[q] = ls.B.imag();
    }
  } else {
    std::map<std::int64_t, LocalSums> at_prime_power;
    for (std::int64_t q = 1; q <= Q; ++q) {
      double a = 1;
      std::complex<double> b{1, 0};
      for (const auto& [p, pk] : factor(q)) {
        auto it = at_prime_power.find(pk);
        if (it == at_prime_power.end()) it = at_prime_power.emplace(pk, local_sums(sys, pk)).first;
        a *= it->second.A;
        b *= it->second.B;
      }
      rep.A[q] = a;
      rep.B[q] = b.real();
      rep.B_imag[q] = b.imag();
    }
  }
  CompensatedSum acc;
  for (std::int64_t q = 1; q <= Q; ++q) {
    acc.add({rep.B[q], 0.0});
    rep.partial[q] = acc.value().re;
  }
  rep.value = rep.partial[Q];
  return rep;
}

SeriesTail series_tail(const SingularSeriesReport& rep, const std::vector<std::int64_t>& ladder) {
  SeriesTail tail;
  tail.ladder = ladder;
  for (auto Q : ladder) {
    if (Q < 1 || Q > rep.Q) throw InvalidInput("series_tail: ladder height outside the computed range");
    tail.values.push_back(rep.partial[Q]);
  }
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    const double d = std::fabs(tail.values[k + 1] - tail.values[k]);
    tail.differences.push_back(d);
    tail.scaled.push_back(d / std::pow(static_cast<double>(ladder[k]), -1.0 / 6.0));
  }
  return tail;
}

CongruenceCount count_congruences(const DiagonalSystem& sys, std::int64_t q, double max_cells) {
  if (q < 1) throw InvalidInput("count_congruences: q must be positive");
  const double cells = static_cast<double>(q) * static_cast<double>(q);
  if (cells > max_cells) throw BudgetExceeded("congruence ledger cells", cells, max_cells);
  if (q == 1) return {1, 1};
  const std::size_t s = sys.s();
  const std::size_t Q2 = static_cast<std::size_t>(q * q);

  // residue ledger of one variable: cell (Theta part, Phi part) -> multiplicity
  auto variable = [&](std::size_t i) {
    std::map<std::size_t, BigCount> hist;
    for (std::int64_t u = 0; u < q; ++u) {
      const __int128 u2 = static_cast<__int128>(u) * u;
      const auto th = mod(mod(sys.cubic_coef(i), q) * (u2 % q) % q * u, q);
      const auto ph = mod(mod(sys.quad_coef(i), q) * (u2 % q), q);
      hist[static_cast<std::size_t>(th * q + ph)] += 1;
    }
    return hist;
  };
  auto half = [&](std::size_t b, std::size_t e) {
    std::vector<BigCount> led(Q2, 0);
    led[0] = 1;
    for (std::size_t i = b; i < e; ++i) {
      std::vector<BigCount> next(Q2, 0);
      const auto hist = variable(i);
      for (std::size_t cell = 0; cell < Q2; ++cell) {
        if (led[cell] == 0) continue;
        const std::int64_t th = static_cast<std::int64_t>(cell) / q, ph = static_cast<std::int64_t>(cell) % q;
        for (const auto& [vc, cnt] : hist) {
          std::int64_t t2 = th + static_cast<std::int64_t>(vc) / q;
          std::int64_t p2 = ph + static_cast<std::int64_t>(vc) % q;
          if (t2 >= q) t2 -= q;
          if (p2 >= q) p2 -= q;
          auto& slot = next[static_cast<std::size_t>(t2 * q + p2)];
          slot = checked_add(slot, checked_mul(led[cell], cnt));
        }
      }
      led.swap(next);
    }
    return led;
  };
  const std::size_t mid = (s + 1) / 2;
  const auto left = half(0, mid);
  const auto right = half(mid, s);
  BigCount M = 0;
  for (std::int64_t th = 0; th < q; ++th)
    for (std::int64_t ph = 0; ph < q; ++ph) {
      const auto a = left[static_cast<std::size_t>(th * q + ph)];
      if (a == 0) continue;
      const auto b = right[static_cast<std::size_t>(((q - th) % q) * q + (q - ph) % q)];
      M = checked_add(M, checked_mul(a, b));
    }
  return {q, M};
}

ChiPartial chi_p_partial(const DiagonalSystem& sys, std::int64_t p, int t) {
  if (!is_prime(p)) throw InvalidInput("chi_p_partial: p must be prime");
  if (t < 0) throw InvalidInput("chi_p_partial: t must be >= 0");
  ChiPartial out;
  out.p = p;
  out.t = t;
  if (t == 0) return out;
  const std::int64_t pt = ipow(p, t);
  const double work = std::pow(static_cast<double>(pt), 3);
  if (work > 4e9) throw BudgetExceeded("chi_p complete sums", work, 4e9);

  double series = 1.0;
  for (int h = 1; h <= t; ++h) series += local_sums(sys, ipow(p, h)).B.real();
  out.series_side = series;
  out.M = count_congruences(sys, pt).M;
  const int s = static_cast<int>(sys.s());
  out.count_side = to_double(out.M) * std::pow(static_cast<double>(p), -static_cast<double>(t) * (s - 2));
  out.relative_difference =
      std::fabs(out.series_side - out.count_side) / std::max(std::fabs(out.count_side), 1e-300);
  return out;
}

namespace {

int valuation(__int128 v, std::int64_t p, int cap) {
  if (v == 0) return cap;
  int k = 0;
  while (k < cap && v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

struct MinorInfo {
  int v;
  std::size_t i, j;
};

// best (lowest valuation) 2x2 minor of the Jacobian of (Theta, Phi), capped at k
MinorInfo best_minor(const DiagonalSystem& sys, const std::vector<std::int64_t>& x, std::int64_t p, int k,
                     std::int64_t pk) {
  MinorInfo best{k, 0, 0};
  const std::size_t s = sys.s();
  for (std::size_t i = 0; i < s; ++i) {
    const __int128 xi = x[i];
    for (std::size_t j = i + 1; j < s; ++j) {
      const __int128 xj = x[j];
      // det [[3 c_i x_i^2, 3 c_j x_j^2], [2 q_i x_i, 2 q_j x_j]]
      const __int128 inner = static_cast<__int128>(sys.cubic_coef(i)) * sys.quad_coef(j) * xi -
                             static_cast<__int128>(sys.cubic_coef(j)) * sys.quad_coef(i) * xj;
      const __int128 det = (6 * (xi * xj % pk) % pk) * (inner % pk) % pk;
      const int v = valuation(det, p, k);
      if (v < best.v) best = {v, i, j};
    }
  }
  return best;
}

bool lifts(const DiagonalSystem& sys, const std::vector<std::int64_t>& x, std::int64_t p, int k, std::int64_t pk,
           MinorInfo& info) {
  if (mod(sys.theta(x), pk) != 0 || mod(sys.phi(x), pk) != 0) return false;
  info = best_minor(sys, x, p, k, pk);
  if (k < 2 * info.v + 1) return false;
  const std::int64_t pkv = ipow(p, k - info.v);
  for (auto xi : x)
    if (xi % pkv != 0) return true;
  return false;
}

}  // namespace

PadicWitness padic_witness(const DiagonalSystem& sys, std::int64_t p, const PadicOptions& opts) {
  if (!is_prime(p)) throw InvalidInput("padic_witness: p must be prime");
  PadicWitness out;
  out.p = p;
  const std::size_t s = sys.s();
  std::mt19937_64 rng(opts.seed ^ static_cast<std::uint64_t>(p) * 0x9E3779B97F4A7C15ULL);

  // two columns searched exhaustively in the randomized mode: prefer two
  // shared variables, else a cubic-bearing and a quadratic-bearing one
  std::size_t ci = 0, cj = s > 1 ? 1 : 0;
  if (sys.l() >= 2) {
    ci = sys.l() - 2;
    cj = sys.l() - 1;
  } else {
    for (std::size_t i = 0; i < s; ++i)
      if (sys.cubic_coef(i) != 0) {
        ci = i;
        break;
      }
    for (std::size_t j = 0; j < s; ++j)
      if (j != ci && sys.quad_coef(j) != 0) {
        cj = j;
        break;
      }
  }

  for (int k = 1; k <= opts.max_k && !out.found; ++k) {
    const std::int64_t pk = ipow(p, k);
    const double space = std::pow(static_cast<double>(pk), static_cast<double>(s));
    std::vector<std::int64_t> x(s, 0);
    MinorInfo info{};
    if (space <= opts.exhaustive_limit) {
      // odometer over (Z/p^k)^s in lexicographic order
      auto advance = [&] {
        for (std::size_t pos = s; pos-- > 0;) {
          if (++x[pos] < pk) return true;
          x[pos] = 0;
        }
        return false;
      };
      do {
        if (lifts(sys, x, p, k, pk, info)) {
          out.found = true;
          break;
        }
      } while (advance());
    } else if (s >= 2) {
      const double pair = static_cast<double>(pk) * static_cast<double>(pk);
      std::uniform_int_distribution<std::int64_t> draw(0, pk - 1);
      if (pair <= opts.search_cells) {
        const auto trials = static_cast<std::size_t>(
            std::max(1.0, std::min(static_cast<double>(opts.random_trials), opts.search_cells / pair)));
        for (std::size_t trial = 0; trial < trials && !out.found; ++trial) {
          for (std::size_t i = 0; i < s; ++i) x[i] = draw(rng);
          for (std::int64_t u = 0; u < pk && !out.found; ++u)
            for (std::int64_t v = 0; v < pk; ++v) {
              x[ci] = u;
              x[cj] = v;
              if (lifts(sys, x, p, k, pk, info)) {
                out.found = true;
                break;
              }
            }
        }
      } else {
        // a full pair sweep is unaffordable; sample whole points instead
        for (std::size_t trial = 0; trial < opts.random_trials && !out.found; ++trial) {
          for (std::size_t i = 0; i < s; ++i) x[i] = draw(rng);
          out.found = lifts(sys, x, p, k, pk, info);
        }
      }
    }
    if (out.found) {
      out.solution = x;
      out.k = k;
      out.minor_valuation = info.v;
      out.minor_columns = {info.i, info.j};
    }
  }

  // lifting inequality M(p^t) >= p^{(t-w)(s-2)} on the affordable t
  const int s2 = static_cast<int>(s) - 2;
  for (int t = 1; t <= opts.max_t; ++t) {
    const double pt = std::pow(static_cast<double>(p), t);
    if (pt * pt > opts.count_cells || pt * pt * pt * static_cast<double>(s) > 2e8) break;
    const auto M = count_congruences(sys, ipow(p, t)).M;
    out.checks.push_back({t, M, std::log(to_double(M)) / std::log(static_cast<double>(p))});
  }
  if (s2 >= 0 && !out.checks.empty()) {
    for (int w = 0; w <= opts.max_t + 1; ++w) {
      bool ok = true;
      for (const auto& c : out.checks) {
        const int e = std::max(0, (c.t - w) * s2);
        if (c.M < sat_pow(p, e)) ok = false;
      }
      if (ok) {
        out.w_estimate = w;
        break;
      }
    }
  }
  return out;
}

}  // namespace cubquad
