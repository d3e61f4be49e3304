#include "cubquad/archimedean.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "cubquad/error.hpp"
#include "cubquad/local.hpp"

namespace cubquad {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> e(double x) {
  const double r = x - std::nearbyint(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

// Gauss-Kronrod 7/15 on [-1, 1]
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Legendre nodes and weights on [-1, 1]
Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - z * z) * pp * pp);
  }
  return r;
}

struct Phase {
  double A, B;  // A g^3 + B g^2
  double value(double g) const { return (A * g + B) * g * g; }
  double slope(double g) const { return (3 * A * g + 2 * B) * g; }
  double max_slope(double a, double b) const {
    double m = std::max(std::fabs(slope(a)), std::fabs(slope(b)));
    if (A != 0) {
      const double g = -B / (3 * A);
      if (g > a && g < b) m = std::max(m, std::fabs(slope(g)));
    }
    return m;
  }
};

std::pair<std::complex<double>, double> gk15(const Phase& ph, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> k = kWgk[7] * e(ph.value(c));
  std::complex<double> g = kWg[3] * e(ph.value(c));
  for (int i = 0; i < 7; ++i) {
    const auto f = e(ph.value(c - h * kXgk[i])) + e(ph.value(c + h * kXgk[i]));
    k += kWgk[i] * f;
    if (i % 2 == 1) g += kWg[i / 2] * f;
  }
  return {k * h, std::abs((k - g) * h)};
}

}  // namespace

OscillatoryValue oscillatory_v(SumKind kind, double beta2, double beta3, double P, double theta, std::int64_t cubic,
                               std::int64_t quad, const QuadratureOptions& opts) {
  if (!(P > 0) || !(theta > 0)) throw InvalidInput("oscillatory_v: P and theta must be positive");
  if (!(opts.rel_tol > 0)) throw InvalidInput("oscillatory_v: tolerance must be positive");
  OscillatoryValue out{kind, beta2, beta3, P, theta, {0, 0}, 0, 0};
  const Phase ph{kind == SumKind::h ? 0.0 : static_cast<double>(cubic) * beta3,
                 kind == SumKind::g ? 0.0 : static_cast<double>(quad) * beta2};
  const double lo = theta * P / 2, hi = 2 * theta * P;
  const double abs_tol = opts.rel_tol * (hi - lo);

  std::complex<double> total{0, 0};
  double err = 0;
  std::size_t panels = 0;
  std::vector<std::pair<double, double>> stack;
  double a = lo;
  while (a < hi) {
    double w = hi - a;
    for (int it = 0; it < 8; ++it) {
      const double f = ph.max_slope(a, a + w);
      if (f * w <= 0.25) break;
      w = 0.25 / f;
    }
    const double b = std::min(hi, a + w);
    stack.emplace_back(a, b);
    while (!stack.empty()) {
      auto [pa, pb] = stack.back();
      stack.pop_back();
      if (++panels > opts.max_panels) throw NumericalFailure("oscillatory_v: panel budget exhausted");
      auto [val, pe] = gk15(ph, pa, pb);
      if (pe > abs_tol * (pb - pa) / (hi - lo) && pb - pa > 1e-12 * (hi - lo)) {
        const double m = 0.5 * (pa + pb);
        stack.emplace_back(m, pb);
        stack.emplace_back(pa, m);
        continue;
      }
      total += val;
      err += pe;
    }
    a = b;
  }
  out.value = total;
  out.error_estimate = err;
  out.panels = panels;
  return out;
}

SumKind variable_kind(const DiagonalSystem& sys, std::size_t i) {
  if (i < sys.l()) return SumKind::f;
  if (i < sys.l() + sys.m()) return SumKind::g;
  return SumKind::h;
}

std::complex<double> product_v(const DiagonalSystem& sys, std::span<const double> theta, double beta2, double beta3,
                               double P, const QuadratureOptions& opts) {
  if (theta.size() != sys.s()) throw NumericalFailure("product_v: anchor missing or of wrong length");
  std::complex<double> prod{1, 0};
  for (std::size_t i = 0; i < sys.s(); ++i)
    prod *= oscillatory_v(variable_kind(sys, i), beta2, beta3, P, theta[i], sys.cubic_coef(i), sys.quad_coef(i), opts)
                .value;
  return prod;
}

namespace {

struct VarSignature {
  std::int64_t cubic, quad;
  double theta;
  auto operator<=>(const VarSignature&) const = default;
};

struct LadderSums {
  std::vector<std::complex<double>> region;  // per ladder rung, the annulus contribution
  std::size_t nodes = 0;
};

LadderSums integrate_ladder(const DiagonalSystem& sys, std::span<const double> theta, double P,
                            const std::vector<double>& ladder, int order, double cells_per_cycle, bool full_plane) {
  const std::size_t s = sys.s();
  const double Qmax = ladder.back();

  // frequencies of V in the scaled variables u = beta2 P^2, w = beta3 P^3
  double freq_u = 0, freq_w = 0;
  for (std::size_t i = 0; i < s; ++i) {
    freq_u += std::fabs(static_cast<double>(sys.quad_coef(i))) * 4 * theta[i] * theta[i];
    freq_w += std::fabs(static_cast<double>(sys.cubic_coef(i))) * 8 * theta[i] * theta[i] * theta[i];
  }
  const auto per_unit_u = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cells_per_cycle * freq_u)));
  const auto per_unit_w = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cells_per_cycle * freq_w)));
  for (double Q : ladder) {
    const double cu = Q * static_cast<double>(per_unit_u), cw = Q * static_cast<double>(per_unit_w);
    if (std::fabs(cu - std::round(cu)) > 1e-9 || std::fabs(cw - std::round(cw)) > 1e-9)
      throw InvalidInput("singular_integral: ladder heights must be integers");
  }
  const Rule gl = gauss_legendre(order);

  // 2-D nodes in scaled units, with the rung each cell belongs to
  auto axis = [&](std::int64_t per_unit, bool symmetric) {
    const auto cells = static_cast<std::int64_t>(std::llround(Qmax * static_cast<double>(per_unit)));
    const double h = 1.0 / static_cast<double>(per_unit);
    std::vector<double> x, w;
    std::vector<int> rung;
    for (std::int64_t c = symmetric ? -cells : 0; c < cells; ++c) {
      const double a = static_cast<double>(c) * h;
      const double edge = std::max(std::fabs(a), std::fabs(a + h));
      int r = 0;
      while (edge > ladder[r] + 1e-12) ++r;
      for (int g = 0; g < order; ++g) {
        x.push_back(a + 0.5 * h * (gl.x[g] + 1));
        w.push_back(0.5 * h * gl.w[g]);
        rung.push_back(r);
      }
    }
    return std::make_tuple(x, w, rung);
  };
  const auto [ux, uw, ur] = axis(per_unit_u, true);
  const auto [wx, ww, wr] = axis(per_unit_w, full_plane);

  // gamma rule per distinct variable: composite Gauss-Legendre with the same
  // density against the phase at the corner of the largest box
  std::map<VarSignature, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < s; ++i) groups[{sys.cubic_coef(i), sys.quad_coef(i), theta[i]}].push_back(i);

  const double P2 = P * P, P3 = P2 * P;
  struct VarData {
    std::size_t power;
    std::vector<double> cub_phase;            // cubic gamma^3 per node
    std::vector<double> weight;               // in gamma units
    std::vector<std::complex<double>> Eu;     // e(beta2_j quad gamma_n^2), row-major [j][n]
  };
  std::vector<VarData> vars;
  const Rule tr = gauss_legendre(order);
  for (const auto& [sig, idx] : groups) {
    VarData vd;
    vd.power = idx.size();
    const double lo = sig.theta / 2, hi = 2 * sig.theta;  // scaled t
    const double fmax = Qmax * (3 * std::fabs(static_cast<double>(sig.cubic)) * hi * hi +
                                2 * std::fabs(static_cast<double>(sig.quad)) * hi);
    const auto panels = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil((hi - lo) * fmax * cells_per_cycle)));
    const double h = (hi - lo) / static_cast<double>(panels);
    std::vector<double> quad_phase;
    for (std::int64_t p = 0; p < panels; ++p)
      for (int g = 0; g < order; ++g) {
        const double gamma = P * (lo + h * (static_cast<double>(p) + 0.5 * (tr.x[g] + 1)));
        vd.cub_phase.push_back(static_cast<double>(sig.cubic) * gamma * gamma * gamma);
        quad_phase.push_back(static_cast<double>(sig.quad) * gamma * gamma);
        vd.weight.push_back(P * 0.5 * h * tr.w[g]);
      }
    const std::size_t nt = quad_phase.size();
    vd.Eu.resize(ux.size() * nt);
    for (std::size_t j = 0; j < ux.size(); ++j) {
      const double b2 = ux[j] / P2;
      for (std::size_t n = 0; n < nt; ++n) vd.Eu[j * nt + n] = e(b2 * quad_phase[n]);
    }
    vars.push_back(std::move(vd));
  }

  LadderSums out;
  out.region.assign(ladder.size(), {0, 0});
  std::vector<CompensatedSum> acc(ladder.size());
  std::vector<std::complex<double>> row(ux.size()), vrow(ux.size()), coef;
  for (std::size_t k = 0; k < wx.size(); ++k) {
    const double b3 = wx[k] / P3;
    std::fill(row.begin(), row.end(), std::complex<double>{1, 0});
    for (const auto& vd : vars) {
      const std::size_t nt = vd.weight.size();
      coef.resize(nt);
      for (std::size_t n = 0; n < nt; ++n) coef[n] = vd.weight[n] * e(b3 * vd.cub_phase[n]);
      for (std::size_t j = 0; j < ux.size(); ++j) {
        const std::complex<double>* E = &vd.Eu[j * nt];
        double re = 0, im = 0;
        for (std::size_t n = 0; n < nt; ++n) {
          re += coef[n].real() * E[n].real() - coef[n].imag() * E[n].imag();
          im += coef[n].real() * E[n].imag() + coef[n].imag() * E[n].real();
        }
        std::complex<double> v{re, im};
        std::complex<double> pw{1, 0};
        for (std::size_t q = 0; q < vd.power; ++q) pw *= v;
        row[j] *= pw;
      }
    }
    const double wk = ww[k] / P3;
    for (std::size_t j = 0; j < ux.size(); ++j) {
      const int r = std::max(ur[j], wr[k]);
      acc[r].add(row[j] * (uw[j] / P2 * wk));
    }
  }
  for (std::size_t r = 0; r < ladder.size(); ++r) out.region[r] = acc[r].value().value();
  out.nodes = ux.size() * wx.size();
  return out;
}

}  // namespace

SingularIntegralReport singular_integral(const DiagonalSystem& sys, std::span<const double> theta, double P,
                                         const SingularIntegralOptions& opts) {
  if (theta.size() != sys.s()) throw NumericalFailure("singular_integral: anchor missing or of wrong length");
  for (double t : theta)
    if (!(t > 0)) throw NumericalFailure("singular_integral: anchor components must be positive");
  if (!(P > 0)) throw InvalidInput("singular_integral: P must be positive");
  if (opts.ladder.empty() || !std::is_sorted(opts.ladder.begin(), opts.ladder.end()) || !(opts.ladder.front() > 0))
    throw InvalidInput("singular_integral: ladder must be positive and ascending");

  const double scale = std::pow(P, static_cast<double>(sys.s()) - 5.0);
  auto run = [&](int order, double cpc) {
    auto sums = integrate_ladder(sys, theta, P, opts.ladder, order, cpc, false);
    std::vector<double> J;
    double cum = 0;
    for (const auto& z : sums.region) {
      cum += 2.0 * z.real();
      J.push_back(cum);
    }
    return std::make_pair(J, sums.nodes);
  };

  int order = opts.order;
  double cpc = opts.cells_per_cycle;
  auto coarse = run(order, cpc);
  SingularIntegralReport rep;
  double err = 0;
  for (int attempt = 0; attempt <= opts.max_refinements; ++attempt) {
    auto fine = run(order + 4, cpc);
    err = 0;
    double mag = 0;
    for (std::size_t k = 0; k < fine.first.size(); ++k) {
      err = std::max(err, std::fabs(fine.first[k] - coarse.first[k]));
      mag = std::max(mag, std::fabs(fine.first[k]));
    }
    coarse = fine;
    order += 4;
    if (err <= opts.tol * mag) break;
    if (attempt == opts.max_refinements)
      throw NumericalFailure("singular_integral: resolutions disagree (" + std::to_string(err / mag) + ")");
  }
  rep.P = P;
  rep.Q = opts.ladder;
  rep.J = coarse.first;
  rep.nodes = coarse.second;
  rep.order = order;
  rep.error_estimate = err / scale;
  for (double j : rep.J) {
    rep.scaled.push_back(j / scale);
    rep.imag.push_back(0.0);
  }
  for (std::size_t k = 0; k + 1 < rep.scaled.size(); ++k) rep.differences.push_back(rep.scaled[k + 1] - rep.scaled[k]);
  for (std::size_t k = 0; k + 1 < rep.differences.size(); ++k)
    rep.tail_ratios.push_back(std::fabs(rep.differences[k + 1] / rep.differences[k]));
  return rep;
}

IntegralLimit extrapolate_limit(const SingularIntegralReport& rep) {
  if (rep.tail_ratios.empty()) throw InvalidInput("extrapolate_limit: need at least three ladder heights");
  auto tail = [&](std::size_t k) {  // extrapolation from rung k + 2 with ratio k
    const double r = std::min(rep.tail_ratios[k], 0.95);
    return std::make_pair(rep.scaled[k + 2] + rep.differences[k + 1] * r / (1 - r), r);
  };
  const std::size_t K = rep.tail_ratios.size() - 1;
  IntegralLimit out;
  std::tie(out.value, out.ratio) = tail(K);
  out.error = K > 0 ? std::fabs(out.value - tail(K - 1).first) : std::fabs(out.value - rep.scaled.back());
  out.error += rep.error_estimate;
  return out;
}

namespace {

double gram_det(const DiagonalSystem& sys, const std::vector<double>& t) {
  double g11 = 0, g22 = 0, g12 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double gc = 3.0 * static_cast<double>(sys.cubic_coef(i)) * t[i] * t[i];
    const double gq = 2.0 * static_cast<double>(sys.quad_coef(i)) * t[i];
    g11 += gc * gc;
    g22 += gq * gq;
    g12 += gc * gq;
  }
  return (g11 * g22 - g12 * g12) / std::max(g11 * g22, 1e-300);
}

// 2x2 minor of the Jacobian in columns (j, k)
double minor(const DiagonalSystem& sys, std::size_t j, std::size_t k, double tj, double tk) {
  return 6.0 * (static_cast<double>(sys.cubic_coef(j)) * tj * tj * static_cast<double>(sys.quad_coef(k)) * tk -
                static_cast<double>(sys.cubic_coef(k)) * tk * tk * static_cast<double>(sys.quad_coef(j)) * tj);
}

}  // namespace

VolumeEstimate volume_constant(const DiagonalSystem& sys, std::span<const double> theta, const VolumeOptions& opts) {
  const std::size_t s = sys.s();
  if (theta.size() != s) throw NumericalFailure("volume_constant: anchor missing or of wrong length");
  for (double t : theta)
    if (!(t > 0)) throw NumericalFailure("volume_constant: anchor components must be positive");
  if (s < 2) throw InvalidInput("volume_constant: need at least two variables");

  // conditioning pair: t_k solved from Phi (quad_k != 0), t_j from Theta by
  // root search; the pair with the best-conditioned minor at the anchor
  std::size_t j = s, k = s;
  double best = 0, scale = 0;
  for (std::size_t i = 0; i < s; ++i)
    scale = std::max(scale, std::fabs(static_cast<double>(sys.cubic_coef(i))) * theta[i] * theta[i] +
                                std::fabs(static_cast<double>(sys.quad_coef(i))) * theta[i]);
  for (std::size_t kk = 0; kk < s; ++kk) {
    if (sys.quad_coef(kk) == 0) continue;
    for (std::size_t jj = 0; jj < s; ++jj) {
      if (jj == kk) continue;
      const double m = std::fabs(minor(sys, jj, kk, theta[jj], theta[kk]));
      if (m > best) {
        best = m;
        j = jj;
        k = kk;
      }
    }
  }
  if (j == s || best <= 1e-9 * scale * scale)
    throw NumericalFailure("volume_constant: Jacobian rank < 2 on every coordinate pair at the anchor");

  const double cj = static_cast<double>(sys.cubic_coef(j)), ck = static_cast<double>(sys.cubic_coef(k));
  const double qj = static_cast<double>(sys.quad_coef(j)), qk = static_cast<double>(sys.quad_coef(k));
  double vol_others = 1;
  for (std::size_t i = 0; i < s; ++i)
    if (i != j && i != k) vol_others *= 1.5 * theta[i];

  VolumeEstimate out;
  out.seed = opts.seed;
  out.samples = opts.samples;
  out.pair = {j, k};
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> t(s);

  // co-area limit: C = E_others[ sum over zeros (t_j, t_k) of 1/|minor| ] * vol_others
  double sum = 0, sumsq = 0;
  std::size_t nonsingular = 0, zeros = 0;
  constexpr int kScan = 64;
  for (std::size_t n = 0; n < opts.samples; ++n) {
    double R3 = 0, R2 = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (i == j || i == k) continue;
      t[i] = theta[i] * (0.5 + 1.5 * U(rng));
      R3 += static_cast<double>(sys.cubic_coef(i)) * t[i] * t[i] * t[i];
      R2 += static_cast<double>(sys.quad_coef(i)) * t[i] * t[i];
    }
    // t_k^2 = (-R2 - qj tj^2) / qk must lie in [theta_k^2/4, 4 theta_k^2]
    double lo = theta[j] / 2, hi = 2 * theta[j];
    const double k_lo = theta[k] * theta[k] / 4, k_hi = 4 * theta[k] * theta[k];
    if (qj == 0) {
      const double tk2 = -R2 / qk;
      if (tk2 < k_lo || tk2 > k_hi) {
        sumsq += 0;
        continue;
      }
    } else {
      // qj tj^2 in [-R2 - qk k_hi, -R2 - qk k_lo] (ordered)
      double a = (-R2 - qk * k_lo) / qj, b = (-R2 - qk * k_hi) / qj;
      if (a > b) std::swap(a, b);
      lo = std::max(lo, a > 0 ? std::sqrt(a) : 0.0);
      hi = std::min(hi, b > 0 ? std::sqrt(b) : 0.0);
      if (!(hi > lo)) continue;
    }
    auto tk_of = [&](double tj) { return std::sqrt(std::max(0.0, (-R2 - qj * tj * tj) / qk)); };
    auto g = [&](double tj) {
      const double tk = tk_of(tj);
      return cj * tj * tj * tj + ck * tk * tk * tk + R3;
    };
    double w = 0;
    double x0 = lo, g0 = g(lo);
    for (int c = 1; c <= kScan; ++c) {
      const double x1 = lo + (hi - lo) * c / kScan, g1 = g(x1);
      if ((g0 < 0) != (g1 < 0)) {
        double a = x0, b = x1, ga = g0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (a + b), gm = g(mid);
          if ((gm < 0) == (ga < 0)) {
            a = mid;
            ga = gm;
          } else {
            b = mid;
          }
        }
        const double tj = 0.5 * (a + b), tk = tk_of(tj);
        const double det = std::fabs(minor(sys, j, k, tj, tk));
        if (det > 0) {
          w += 1.0 / det;
          ++zeros;
          t[j] = tj;
          t[k] = tk;
          if (gram_det(sys, t) > 1e-12) ++nonsingular;
        }
      }
      x0 = x1;
      g0 = g1;
    }
    sum += w;
    sumsq += w * w;
  }
  const double N = static_cast<double>(opts.samples);
  if (zeros == 0) throw NumericalFailure("volume_constant: no sampled slice meets the variety");
  if (nonsingular == 0) throw NumericalFailure("volume_constant: Jacobian rank < 2 at every sampled point");
  const double mean = sum / N;
  out.C = vol_others * mean;
  out.stderr_ = vol_others * std::sqrt(std::max(0.0, sumsq / N - mean * mean) / N);

  // thin-shell cross-check |Theta| < d3, |Phi| < d2 with the Phi-shell
  // resolved exactly in t_k
  double scale3 = 0, scale2 = 0;
  for (std::size_t i = 0; i < s; ++i) {
    scale3 += std::fabs(static_cast<double>(sys.cubic_coef(i))) * theta[i] * theta[i] * theta[i];
    scale2 += std::fabs(static_cast<double>(sys.quad_coef(i))) * theta[i] * theta[i];
  }
  double shell_others = 1;
  for (std::size_t i = 0; i < s; ++i)
    if (i != k) shell_others *= 1.5 * theta[i];
  double delta = opts.delta;
  out.stable = true;
  for (int level = 0; level < opts.levels; ++level, delta /= 2) {
    const double d3 = delta * scale3, d2 = delta * scale2;
    double ssum = 0, ssq = 0;
    std::size_t hits = 0;
    for (std::size_t n = 0; n < opts.shell_samples; ++n) {
      double R2 = 0;
      for (std::size_t i = 0; i < s; ++i) {
        if (i == k) continue;
        t[i] = theta[i] * (0.5 + 1.5 * U(rng));
        R2 += static_cast<double>(sys.quad_coef(i)) * t[i] * t[i];
      }
      double lo2 = (-R2 - d2) / qk, hi2 = (-R2 + d2) / qk;
      if (lo2 > hi2) std::swap(lo2, hi2);
      const double a = std::max(theta[k] / 2, lo2 > 0 ? std::sqrt(lo2) : 0.0);
      const double b = std::min(2 * theta[k], hi2 > 0 ? std::sqrt(hi2) : 0.0);
      const double u = U(rng);
      if (!(b > a)) continue;
      t[k] = a + (b - a) * u;
      double th = 0;
      for (std::size_t i = 0; i < s; ++i) th += static_cast<double>(sys.cubic_coef(i)) * t[i] * t[i] * t[i];
      if (std::fabs(th) >= d3) continue;
      ssum += b - a;
      ssq += (b - a) * (b - a);
      ++hits;
    }
    const double M = static_cast<double>(opts.shell_samples);
    const double mean_s = ssum / M;
    const double norm = shell_others / (4 * d3 * d2);
    VolumeLevel lv{delta, mean_s * norm, std::sqrt(std::max(0.0, ssq / M - mean_s * mean_s) / M) * norm, hits};
    if (std::fabs(lv.C - out.C) > 3 * std::hypot(lv.stderr_, out.stderr_)) out.stable = false;
    out.levels.push_back(lv);
  }
  return out;
}

StarApprox star_approx(const DiagonalSystem& sys, std::span<const double> theta, std::size_t index, double alpha2,
                       double alpha3, double P, const QuadratureOptions& opts) {
  if (index >= sys.s()) throw InvalidInput("star_approx: variable index out of range");
  if (theta.size() != sys.s()) throw NumericalFailure("star_approx: anchor missing or of wrong length");
  StarApprox out;
  const ArcFamily fam{P, P, sys.t(), true};
  const auto mem = membership(alpha2, alpha3, fam);
  if (!mem.inside) return out;
  out.on_major_arc = true;
  out.witness = *mem.witness;
  const auto [q, r2, r3] = std::tuple{out.witness.q, out.witness.r2, out.witness.r3};
  const SumKind kind = variable_kind(sys, index);
  const auto S = complete_sum(kind, q, r2, r3, sys.cubic_coef(index), sys.quad_coef(index)).value;
  const double qd = static_cast<double>(q);
  const auto v = oscillatory_v(kind, alpha2 - static_cast<double>(r2) / qd, alpha3 - static_cast<double>(r3) / qd, P,
                               theta[index], sys.cubic_coef(index), sys.quad_coef(index), opts);
  out.value = S / qd * v.value;
  return out;
}

}  // namespace cubquad
