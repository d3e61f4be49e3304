#include "cubquad/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance/suite.hpp"
#include "cubquad/archimedean.hpp"
#include "cubquad/arcs.hpp"
#include "cubquad/conditions.hpp"
#include "cubquad/error.hpp"
#include "cubquad/expsums.hpp"
#include "cubquad/local.hpp"
#include "cubquad/moments.hpp"
#include "cubquad/smooth.hpp"
#include "cubquad/solver.hpp"
#include "cubquad/system.hpp"
#include "json.hpp"

namespace cubquad::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Artifact {
  Json result = Json::object();
  std::optional<Table> table;
  bool failed = false;  // assertion-style failure (verify)
};

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string num(std::int64_t v) { return std::to_string(v); }

Json big(BigCount v) { return to_decimal(v); }

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json real_vector(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
  if (!v) throw InvalidInput(std::string("missing required option --") + flag);
  return *v;
}

LedgerBudget budget_of(const RunConfig& c) { return {c.max_entries, c.max_work}; }

DiagonalSystem need_system(const RunConfig& c) {
  if (c.spec_path.empty()) throw InvalidInput("missing required option --spec");
  return load_system(c.spec_path);
}

SumKind parse_kind(const std::string& k) {
  if (k == "f") return SumKind::f;
  if (k == "g") return SumKind::g;
  if (k == "h") return SumKind::h;
  throw InvalidInput("kind must be f, g or h (got '" + k + "')");
}

const char* kind_name(SumKind k) { return k == SumKind::f ? "f" : k == SumKind::g ? "g" : "h"; }

Restriction parse_restriction(const std::string& r) {
  if (r == "none") return Restriction::none;
  if (r == "smooth_y") return Restriction::smooth_y;
  if (r == "smooth_x") return Restriction::smooth_x;
  throw InvalidInput("restriction must be none, smooth_y or smooth_x (got '" + r + "')");
}

Json system_json(const DiagonalSystem& sys) {
  return Json{{"a", sys.a()},
              {"b", sys.b()},
              {"c", sys.c()},
              {"d", sys.d()},
              {"s", sys.s()},
              {"class", std::string(to_string(classify(sys)))}};
}

Json config_echo(const RunConfig& c, const std::string& op, const std::string& format) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["op"] = op;
  if (!c.spec_path.empty()) j["spec"] = c.spec_path;
  auto put = [&](const char* k, const auto& v) {
    if (v) j[k] = *v;
  };
  put("X", c.X);
  put("Y", c.Y);
  put("H", c.H);
  put("B", c.B);
  put("Q", c.Q);
  put("R", c.R);
  put("s", c.s);
  put("P", c.P);
  put("q", c.q);
  put("p", c.p);
  put("t", c.t);
  put("h_range", c.h_range);
  put("N", c.N);
  put("alpha", c.alpha);
  put("alpha2", c.alpha2);
  put("alpha3", c.alpha3);
  put("theta", c.theta);
  put("eta", c.eta);
  if (c.subcommand == "arch" || c.subcommand == "arcs" || !c.factors.empty()) {
    j["kind"] = c.kind;
    j["cubic"] = c.cubic;
    j["quad"] = c.quad;
  }
  if (!c.factors.empty()) j["factors"] = c.factors;
  if (!c.ladder.empty()) j["ladder"] = c.ladder;
  if (c.restriction != "none") j["restriction"] = c.restriction;
  if (c.grid) j["grid"] = c.grid;
  if (c.subcommand == "smooth") {
    j["u_max"] = c.u_max;
    j["u_step"] = c.u_step;
  }
  if (c.samples) j["samples"] = c.samples;
  if (c.subcommand == "verify") j["profile"] = c.profile;
  j["seed"] = c.seed;
  j["budget"] = {{"max_entries", c.max_entries}, {"max_work", c.max_work}, {"max_cells", c.max_cells}};
  j["format"] = format;
  return j;
}

Json versions() {
  return Json{{"cubquad", kVersion},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION},
              {"compiler", __VERSION__}};
}

// ---------------------------------------------------------------- moments

MomentFactor parse_factor(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 6 && parts.size() != 7)
    throw InvalidInput("factor '" + text + "' must read kind:cubic:quad:theta:P:exponent[:R]");
  try {
    BoxSumSpec spec;
    spec.kind = parse_kind(parts[0]);
    spec.cubic = std::stoll(parts[1]);
    spec.quad = std::stoll(parts[2]);
    spec.theta = std::stod(parts[3]);
    spec.P = std::stod(parts[4]);
    if (parts.size() == 7) spec.smooth_R = std::stoll(parts[6]);
    return MomentFactor::box(spec, std::stoi(parts[5]));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("factor '" + text + "': malformed number");
  }
}

Artifact cmd_moments(const RunConfig& c, std::string& op) {
  if (op.empty()) op = !c.factors.empty() ? "mixed" : "T";
  const auto budget = budget_of(c);
  MomentResult res;
  if (op == "T") {
    res = moment_T(static_cast<int>(need(c.s, "s")), need(c.X, "x"), budget);
  } else if (op == "Tshift") {
    res = moment_T_shifted(static_cast<int>(need(c.s, "s")), need(c.X, "x"), need(c.h_range, "h-range"), budget);
  } else if (op == "I") {
    res = moment_I(static_cast<int>(need(c.s, "s")), need(c.Y, "Y"), need(c.H, "H"), budget);
  } else if (op == "J") {
    res = moment_J(static_cast<int>(need(c.s, "s")), need(c.X, "x"), budget);
  } else if (op == "J1") {
    res = count_J1(need(c.Y, "Y"), need(c.H, "H"), budget);
  } else if (op == "mixed") {
    if (c.factors.empty()) throw InvalidInput("mixed needs at least one --factor");
    std::vector<MomentFactor> fs;
    for (const auto& f : c.factors) fs.push_back(parse_factor(f));
    res = mixed_moment(fs, budget);
    res.parameters.clear();
    for (std::size_t i = 0; i < c.factors.size(); ++i) res.parameters.emplace_back("factor" + std::to_string(i + 1), c.factors[i]);
  } else if (op == "I2classes") {
    const auto cls = classify_I2(need(c.Y, "Y"), need(c.H, "H"));
    Artifact a;
    a.result = Json{{"Y", *c.Y},
                    {"H", *c.H},
                    {"total", big(cls.total)},
                    {"T0", big(cls.T0)},
                    {"T1", big(cls.T1)},
                    {"T2", big(cls.T2)},
                    {"identity_violations", big(cls.identity_violations)}};
    a.table = Table{{"Y", "H", "total", "T0", "T1", "T2", "identity_violations"},
                    {{num(*c.Y), num(*c.H), to_decimal(cls.total), to_decimal(cls.T0), to_decimal(cls.T1),
                      to_decimal(cls.T2), to_decimal(cls.identity_violations)}}};
    return a;
  } else {
    throw InvalidInput("unknown moments op '" + op + "' (T, Tshift, I, J, J1, mixed, I2classes)");
  }
  Artifact a;
  Table t;
  t.header.push_back("moment");
  std::vector<std::string> row{op};
  Json params = Json::object();
  for (const auto& [k, v] : res.parameters) {
    t.header.push_back(k);
    row.push_back(v);
    params[k] = v;
  }
  t.header.insert(t.header.end(), {"value", "method"});
  row.insert(row.end(), {to_decimal(res.value), std::string(to_string(res.method))});
  t.rows.push_back(row);
  a.result = Json{{"moment", op}, {"parameters", params}, {"value", big(res.value)}, {"method", to_string(res.method)}};
  a.table = t;
  return a;
}

// ---------------------------------------------------------------- local

Json chi_json(const ChiPartial& c) {
  return Json{{"p", c.p},
              {"t", c.t},
              {"series_side", real(c.series_side)},
              {"count_side", real(c.count_side)},
              {"M", big(c.M)},
              {"relative_difference", real(c.relative_difference)}};
}

Artifact cmd_local(const RunConfig& c, std::string& op) {
  if (op.empty()) op = "series";
  const auto sys = need_system(c);
  Artifact a;
  if (op == "series") {
    const auto Q = need(c.Q, "Q");
    const auto rep = singular_series(sys, Q);
    Json per_q = Json::array();
    Table t{{"q", "A", "B", "B_imag", "partial"}, {}};
    for (std::int64_t q = 1; q <= Q; ++q) {
      const auto k = static_cast<std::size_t>(q);
      per_q.push_back(Json{{"q", q},
                           {"A", real(rep.A[k])},
                           {"B", real(rep.B[k])},
                           {"B_imag", real(rep.B_imag[k])},
                           {"partial", real(rep.partial[k])}});
      t.rows.push_back({num(q), num(rep.A[k]), num(rep.B[k]), num(rep.B_imag[k]), num(rep.partial[k])});
    }
    Json chis = Json::array();
    const int t_max = static_cast<int>(c.t.value_or(1));
    for (std::int64_t p : primes_up_to(std::min<std::int64_t>(Q, 7)))
      for (int tt = 1; tt <= t_max; ++tt) {
        try {
          chis.push_back(chi_json(chi_p_partial(sys, p, tt)));
        } catch (const BudgetExceeded& e) {
          chis.push_back(Json{{"p", p}, {"t", tt}, {"skipped", e.what()}});
        }
      }
    a.result = Json{{"system", system_json(sys)}, {"Q", Q}, {"value", real(rep.value)}, {"per_q", per_q}, {"chi_p", chis}};
    a.table = t;
  } else if (op == "chi") {
    const auto ch = chi_p_partial(sys, need(c.p, "p"), static_cast<int>(need(c.t, "t")));
    a.result = Json{{"system", system_json(sys)}, {"chi", chi_json(ch)}};
    a.table = Table{{"p", "t", "series_side", "count_side", "M", "relative_difference"},
                    {{num(ch.p), num(std::int64_t{ch.t}), num(ch.series_side), num(ch.count_side), to_decimal(ch.M),
                      num(ch.relative_difference)}}};
  } else if (op == "M") {
    const auto m = count_congruences(sys, need(c.q, "q"), c.max_cells);
    a.result = Json{{"system", system_json(sys)}, {"q", m.q}, {"M", big(m.M)}};
    a.table = Table{{"q", "M"}, {{num(m.q), to_decimal(m.M)}}};
  } else if (op == "padic") {
    PadicOptions po;
    po.seed = c.seed;
    const auto w = padic_witness(sys, need(c.p, "p"), po);
    Json checks = Json::array();
    for (const auto& ch : w.checks) checks.push_back(Json{{"t", ch.t}, {"M", big(ch.M)}, {"log_p_M", real(ch.log_p_M)}});
    a.result = Json{{"system", system_json(sys)},
                    {"p", w.p},
                    {"found", w.found},
                    {"k", w.k},
                    {"solution", w.solution},
                    {"minor_valuation", w.minor_valuation},
                    {"minor_columns", {w.minor_columns.first, w.minor_columns.second}},
                    {"w_estimate", w.w_estimate ? Json(*w.w_estimate) : Json(nullptr)},
                    {"checks", checks}};
  } else {
    throw InvalidInput("unknown local op '" + op + "' (series, chi, M, padic)");
  }
  return a;
}

// ---------------------------------------------------------------- arch

Json anchor_json(const RealAnchor& an) {
  return Json{{"theta", real_vector(an.theta)},
              {"flips", an.flips},
              {"normalized", system_json(an.normalized)},
              {"residual_theta", real(an.residual_theta)},
              {"residual_phi", real(an.residual_phi)},
              {"sigma_min", real(an.sigma_min)},
              {"sigma_max", real(an.sigma_max)},
              {"jacobian_rank", an.jacobian_rank}};
}

RealAnchor need_anchor(const DiagonalSystem& sys, const RunConfig& c) {
  AnchorOptions ao;
  ao.seed = c.seed;
  auto an = find_real_anchor(sys, ao);
  if (!an) throw NumericalFailure("no real anchor found");
  return *an;
}

Json volume_json(const VolumeEstimate& v) {
  Json levels = Json::array();
  for (const auto& l : v.levels)
    levels.push_back(Json{{"delta", real(l.delta)}, {"C", real(l.C)}, {"stderr", real(l.stderr_)}, {"hits", l.hits}});
  return Json{{"C", real(v.C)},
              {"stderr", real(v.stderr_)},
              {"stable", v.stable},
              {"samples", v.samples},
              {"seed", v.seed},
              {"pair", {v.pair.first, v.pair.second}},
              {"shell_levels", levels}};
}

Artifact cmd_arch(const RunConfig& c, std::string& op) {
  if (op.empty()) op = "integral";
  Artifact a;
  if (op == "v") {
    const auto v = oscillatory_v(parse_kind(c.kind), need(c.alpha2, "alpha2"), need(c.alpha3, "alpha3"),
                                 need(c.P, "P"), c.theta.value_or(0.25), c.cubic, c.quad);
    a.result = Json{{"kind", kind_name(v.kind)},
                    {"beta2", v.beta2},
                    {"beta3", v.beta3},
                    {"P", v.P},
                    {"theta", v.theta},
                    {"re", real(v.value.real())},
                    {"im", real(v.value.imag())},
                    {"magnitude", real(std::abs(v.value))},
                    {"error_estimate", real(v.error_estimate)},
                    {"panels", v.panels}};
    a.table = Table{{"beta2", "beta3", "re", "im", "magnitude"},
                    {{num(v.beta2), num(v.beta3), num(v.value.real()), num(v.value.imag()), num(std::abs(v.value))}}};
    return a;
  }
  const auto sys = need_system(c);
  const auto anchor = need_anchor(sys, c);
  if (!anchor.nonsingular()) throw NumericalFailure("only a singular real zero was found; the volume needs rank 2");
  VolumeOptions vo;
  vo.seed = c.seed;
  if (c.samples) {
    vo.samples = c.samples;
    vo.shell_samples = std::max<std::size_t>(c.samples / 2, 1);
  }
  if (op == "volume") {
    const auto v = volume_constant(anchor.normalized, anchor.theta, vo);
    a.result = Json{{"system", system_json(sys)}, {"anchor", anchor_json(anchor)}, {"volume", volume_json(v)}};
    a.table = Table{{"C", "stderr", "stable"}, {{num(v.C), num(v.stderr_), v.stable ? "true" : "false"}}};
  } else if (op == "integral") {
    SingularIntegralOptions so;
    if (!c.ladder.empty()) so.ladder = c.ladder;
    const double P = c.P.value_or(100);
    const auto rep = singular_integral(anchor.normalized, anchor.theta, P, so);
    const auto v = volume_constant(anchor.normalized, anchor.theta, vo);
    Json ladder = Json::array();
    Table t{{"Q", "J", "scaled", "imag"}, {}};
    for (std::size_t k = 0; k < rep.Q.size(); ++k) {
      ladder.push_back(Json{{"Q", rep.Q[k]}, {"J", real(rep.J[k])}, {"scaled", real(rep.scaled[k])}, {"imag", real(rep.imag[k])}});
      t.rows.push_back({num(rep.Q[k]), num(rep.J[k]), num(rep.scaled[k]), num(rep.imag[k])});
    }
    Json limit = nullptr;
    if (rep.Q.size() >= 3) {
      const auto lim = extrapolate_limit(rep);
      limit = Json{{"value", real(lim.value)}, {"error", real(lim.error)}, {"ratio", real(lim.ratio)}};
    }
    a.result = Json{{"system", system_json(sys)},
                    {"anchor", anchor_json(anchor)},
                    {"P", P},
                    {"ladder", ladder},
                    {"differences", real_vector(rep.differences)},
                    {"tail_ratios", real_vector(rep.tail_ratios)},
                    {"quadrature_error", real(rep.error_estimate)},
                    {"nodes", rep.nodes},
                    {"order", rep.order},
                    {"limit", limit},
                    {"volume", volume_json(v)}};
    a.table = t;
  } else {
    throw InvalidInput("unknown arch op '" + op + "' (v, integral, volume)");
  }
  return a;
}

// ---------------------------------------------------------------- arcs

Artifact cmd_arcs(const RunConfig& c, std::string& op) {
  if (op.empty()) op = "membership";
  Artifact a;
  if (op == "membership") {
    ArcFamily fam{static_cast<double>(need(c.Q, "Q")), need(c.P, "P"), 1, true};
    if (!c.spec_path.empty()) fam.t = need_system(c).t();
    const auto al2 = need(c.alpha2, "alpha2"), al3 = need(c.alpha3, "alpha3");
    const auto m = membership(al2, al3, fam);
    fam.homogeneous = false;
    const auto mi = membership(al2, al3, fam);
    auto wj = [](const ArcMembership& m) {
      return m.witness ? Json{{"q", m.witness->q}, {"r2", m.witness->r2}, {"r3", m.witness->r3}} : Json(nullptr);
    };
    a.result = Json{{"alpha2", al2},
                    {"alpha3", al3},
                    {"t", fam.t},
                    {"homogeneous", {{"inside", m.inside}, {"witness", wj(m)}}},
                    {"inhomogeneous", {{"inside", mi.inside}, {"witness", wj(mi)}}}};
    a.table = Table{{"alpha2", "alpha3", "homogeneous", "inhomogeneous"},
                    {{num(al2), num(al3), m.inside ? "1" : "0", mi.inside ? "1" : "0"}}};
  } else if (op == "dirichlet") {
    const auto r = dirichlet_approx(need(c.alpha, "alpha"), need(c.N, "N"));
    a.result = Json{{"alpha", *c.alpha}, {"N", *c.N}, {"a", r.a}, {"q", r.q}, {"error", real(r.error)}};
    a.table = Table{{"alpha", "N", "a", "q", "error"}, {{num(*c.alpha), num(*c.N), num(r.a), num(r.q), num(r.error)}}};
  } else if (op == "transfer") {
    const auto Y = need(c.Y, "Y"), H = need(c.H, "H");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(0, 1);
    const double a1 = U(rng), a2 = U(rng);
    std::vector<std::pair<double, double>> samples;
    const std::size_t n = c.samples ? c.samples : 150;
    for (std::size_t k = 0; k < n; ++k) {
      const double al = U(rng);
      samples.emplace_back(al, block_sum(a1, a2, al, Y, H).magnitude());
    }
    TransferParams tp;
    tp.X = 2.0 * H * Y;
    tp.Y = static_cast<double>(Y);
    tp.Z = static_cast<double>(H) * Y * Y;
    tp.theta = c.theta.value_or(0.5);
    const auto rep = transfer_bound_check(samples, tp);
    a.result = Json{{"Y", Y},
                    {"H", H},
                    {"alpha1", a1},
                    {"alpha2", a2},
                    {"X", tp.X},
                    {"Z", tp.Z},
                    {"theta", tp.theta},
                    {"C1", real(rep.C1)},
                    {"C2", real(rep.C2)},
                    {"worst_ratio", real(rep.worst_ratio)},
                    {"worst_constant", real(rep.worst_constant)},
                    {"worst", {{"alpha", rep.worst_alpha}, {"b", rep.worst_b}, {"r", rep.worst_r}}},
                    {"violations", rep.violations},
                    {"pairs_checked", rep.pairs_checked}};
    a.table = Table{{"Y", "H", "C1", "C2", "worst_ratio", "worst_constant", "violations", "pairs_checked"},
                    {{num(Y), num(H), num(rep.C1), num(rep.C2), num(rep.worst_ratio), num(rep.worst_constant),
                      std::to_string(rep.violations), std::to_string(rep.pairs_checked)}}};
  } else if (op == "lambda") {
    const auto lam = transfer_lambda(need(c.alpha, "alpha"), need(c.p, "b"), need(c.q, "r"), need(c.P, "Z"));
    a.result = Json{{"alpha", *c.alpha}, {"b", *c.p}, {"r", *c.q}, {"Z", *c.P}, {"lambda", real(lam)}};
    a.table = Table{{"alpha", "b", "r", "Z", "lambda"}, {{num(*c.alpha), num(*c.p), num(*c.q), num(*c.P), num(lam)}}};
  } else if (op == "grid") {
    const auto X = need(c.X, "x");
    const auto n = c.grid > 0 ? c.grid : 16;
    Table t{{"alpha2", "alpha3", "re", "im", "magnitude"}, {}};
    Json rows = Json::array();
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        const double al2 = static_cast<double>(i) / static_cast<double>(n);
        const double al3 = static_cast<double>(j) / static_cast<double>(n);
        const auto v = weyl_sum(al3, al2, X);
        t.rows.push_back({num(al2), num(al3), num(v.re), num(v.im), num(v.magnitude())});
        rows.push_back({al2, al3, v.re, v.im, v.magnitude()});
      }
    a.result = Json{{"X", X}, {"columns", t.header}, {"rows", rows}};
    a.table = t;
  } else {
    throw InvalidInput("unknown arcs op '" + op + "' (membership, dirichlet, transfer, lambda, grid)");
  }
  return a;
}

// ---------------------------------------------------------------- smooth

Artifact cmd_smooth(const RunConfig& c, std::string& op) {
  if (op.empty()) op = "set";
  Artifact a;
  if (op == "set") {
    const auto X = need(c.X, "x");
    std::int64_t R;
    if (c.R)
      R = *c.R;
    else if (c.eta)
      R = smooth_bound(static_cast<double>(X), *c.eta);
    else
      throw InvalidInput("smooth set needs --R or --eta");
    if (static_cast<double>(X) > c.max_cells) throw BudgetExceeded("smooth set sieve", static_cast<double>(X), c.max_cells);
    const auto set = smooth_set(X, R);
    Table t{{"n"}, {}};
    for (auto v : set.members) t.rows.push_back({num(v)});
    a.result = Json{{"X", X},
                    {"R", R},
                    {"size", set.size()},
                    {"density", static_cast<double>(set.size()) / static_cast<double>(X)},
                    {"members", set.members}};
    a.table = t;
  } else if (op == "rho") {
    if (!(c.u_step > 0) || !(c.u_max >= 0) || c.u_max > 20) throw InvalidInput("rho table needs 0 < u-step and 0 <= u-max <= 20");
    Table t{{"u", "rho"}, {}};
    Json rows = Json::array();
    const auto n = static_cast<std::int64_t>(std::floor(c.u_max / c.u_step + 1e-9));
    for (std::int64_t k = 0; k <= n; ++k) {
      const double u = static_cast<double>(k) * c.u_step;
      const double r = dickman_rho(u).rho;
      t.rows.push_back({num(u), num(r)});
      rows.push_back({u, r});
    }
    a.result = Json{{"columns", t.header}, {"rows", rows}};
    a.table = t;
  } else {
    throw InvalidInput("unknown smooth op '" + op + "' (set, rho)");
  }
  return a;
}

// ---------------------------------------------------------------- solve

Json count_json(const SolutionCount& sc) {
  Json w = Json::array();
  for (const auto& x : sc.witnesses) w.push_back(x);
  return Json{{"style", sc.style},
              {"bound", sc.bound},
              {"restriction", to_string(sc.restriction)},
              {"smooth_R", sc.smooth_R},
              {"count", big(sc.count)},
              {"witnesses", w},
              {"witnesses_exhausted", sc.witnesses_exhausted}};
}

Artifact cmd_solve(const RunConfig& c, std::string& op) {
  const auto sys = need_system(c);
  if (op.empty()) op = c.B ? "count" : (c.P ? "predict" : "anchor");
  CountOptions co;
  co.budget = budget_of(c);
  Artifact a;
  a.result["system"] = system_json(sys);
  if (op == "count") {
    if (c.B) {
      const auto sc = count_solutions(sys, *c.B, co);
      a.result["count"] = count_json(sc);
      a.table = Table{{"style", "bound", "count"}, {{"N", num(*c.B), to_decimal(sc.count)}}};
    } else {
      const auto anchor = need_anchor(sys, c);
      const auto restr = parse_restriction(c.restriction);
      const std::int64_t R = restr == Restriction::none ? 0 : need(c.R, "R");
      const auto sc = count_solutions(anchor, need(c.P, "P"), restr, R, co);
      a.result["anchor"] = anchor_json(anchor);
      a.result["count"] = count_json(sc);
      a.table = Table{{"style", "bound", "restriction", "count"},
                      {{"R", num(*c.P), to_string(restr), to_decimal(sc.count)}}};
    }
  } else if (op == "witness") {
    const auto w = search_witness(sys, need(c.B, "B"), co);
    a.result["B"] = *c.B;
    a.result["witness"] = w ? Json(*w) : Json(nullptr);
    a.result["verified"] = w ? sys.solves(*w) : false;
  } else if (op == "anchor") {
    AnchorOptions ao;
    ao.seed = c.seed;
    const auto an = find_real_anchor(sys, ao);
    a.result["anchor"] = an ? anchor_json(*an) : Json(nullptr);
    if (!an) a.result["reason"] = "no real zero with components in (0, 1/2) found; the real condition may fail";
  } else if (op == "predict") {
    const auto anchor = need_anchor(sys, c);
    PredictionOptions po;
    po.series_Q = c.Q.value_or(50);
    po.volume.seed = c.seed;
    if (c.samples) po.volume.samples = c.samples;
    po.smooth_R = c.R.value_or(0);
    po.eta = c.eta.value_or(0);
    po.count = co;
    const auto restr = parse_restriction(c.restriction);
    const auto rep = predict_and_compare(anchor, sys, need(c.P, "P"), restr, po);
    a.result["anchor"] = anchor_json(anchor);
    a.result["prediction"] = Json{{"P", rep.P},
                                  {"restriction", to_string(rep.restriction)},
                                  {"observed", big(rep.observed)},
                                  {"C", real(rep.C)},
                                  {"C_stderr", real(rep.C_stderr)},
                                  {"series", real(rep.series)},
                                  {"series_Q", rep.series_Q},
                                  {"smooth_factor", real(rep.smooth_factor)},
                                  {"prediction", real(rep.prediction)},
                                  {"ratio", real(rep.ratio)}};
    a.table = Table{{"P", "restriction", "observed", "prediction", "ratio"},
                    {{num(rep.P), to_string(rep.restriction), to_decimal(rep.observed), num(rep.prediction), num(rep.ratio)}}};
  } else if (op == "conditions") {
    ConditionOptions opts;
    opts.prime_bound = c.p.value_or(100);
    opts.anchor.seed = c.seed;
    const auto rep = check_conditions(sys, opts);
    Json padic = Json::object();
    for (const auto& [p, w] : rep.padic_witnesses)
      padic[std::to_string(p)] = Json{{"found", w.found}, {"k", w.k}, {"solution", w.solution}, {"minor_valuation", w.minor_valuation}};
    a.result["conditions"] = Json{{"real_solution", rep.real_solution ? anchor_json(*rep.real_solution) : Json(nullptr)},
                                  {"indefinite_phi", rep.indefinite_phi},
                                  {"count_cubic_ok", rep.count_cubic_ok},
                                  {"count_quad_ok", rep.count_quad_ok},
                                  {"total_ok", rep.total_ok},
                                  {"padic", padic}};
  } else {
    throw InvalidInput("unknown solve op '" + op + "' (count, witness, anchor, predict, conditions)");
  }
  return a;
}

// ---------------------------------------------------------------- verify

// int int |F(alpha, beta; X)|^power over a uniform grid; exact for even integer
// powers 2k once the grid exceeds the frequency range k X^3, k X^2
double moment_by_quadrature(std::int64_t X, double power) {
  const int k = static_cast<int>(std::ceil(power / 2));
  const std::int64_t n3 = k * X * X * X + 1, n2 = k * X * X + 1;
  double acc = 0;
  for (std::int64_t i = 0; i < n3; ++i)
    for (std::int64_t j = 0; j < n2; ++j)
      acc += std::pow(weyl_sum(static_cast<double>(i) / n3, static_cast<double>(j) / n2, X).magnitude(), power);
  return acc / static_cast<double>(n3 * n2);
}

Artifact cmd_verify(const RunConfig& c, std::string& op, std::ostream& err) {
  if (op.empty()) op = "acceptance";
  if (op != "acceptance") throw InvalidInput("unknown verify op '" + op + "' (acceptance)");
  const auto profile = acceptance::parse_profile(c.profile);
  const auto results = acceptance::run_all(profile, &err);
  Artifact a;
  Json crit = Json::array();
  Table t{{"id", "title", "pass", "detail"}, {}};
  std::size_t passed = 0;
  for (const auto& r : results) {
    passed += r.pass ? 1 : 0;
    crit.push_back(Json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    t.rows.push_back({num(std::int64_t{r.id}), r.title, r.pass ? "1" : "0", r.detail});
  }
  // fractional moments are not counts; coarse quadrature only
  Json frac = Json::array();
  for (std::int64_t X : {4, 6}) {
    const double q10 = moment_by_quadrature(X, 10);
    const double exact = to_double(moment_T(5, X).value);
    const double q32 = moment_by_quadrature(X, 32.0 / 3);
    frac.push_back(Json{{"X", X},
                        {"T5_quadrature", real(q10)},
                        {"T5_exact", big(moment_T(5, X).value)},
                        {"T5_relative_error", real(std::fabs(q10 - exact) / exact)},
                        {"T32_3_approximate", real(q32)},
                        {"T32_3_over_X^(17/3)", real(q32 / std::pow(static_cast<double>(X), 17.0 / 3))}});
  }
  a.result = Json{{"profile", c.profile},
                  {"passed", passed},
                  {"total", results.size()},
                  {"criteria", crit},
                  {"fractional_moments_approximate", frac}};
  a.table = t;
  a.failed = passed != results.size();
  return a;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const Table& t, const Json& echo) {
  os << "# cubquad " << kVersion << " config " << echo.dump() << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_escape(t.header[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << "\n";
  }
}

std::string default_format(const std::string& sub) {
  return sub == "moments" || sub == "smooth" ? "csv" : "json";
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.output.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw InvalidInput("cannot open output file " + c.output);
  f << text;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"cubquad: cubic-quadratic diagonal systems lab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--op", c.op, "operation within the subcommand");
    sub->add_option("--seed", c.seed, "random seed (recorded in the report)");
    sub->add_option("--max-entries", c.max_entries, "ledger entry cap")->check(CLI::PositiveNumber);
    sub->add_option("--max-work", c.max_work, "match-phase work cap")->check(CLI::PositiveNumber);
    sub->add_option("--max-cells", c.max_cells, "enumeration cap")->check(CLI::PositiveNumber);
    sub->add_option("--output,-o", c.output, "output path (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto spec = [&](CLI::App* sub) { sub->add_option("--spec", c.spec_path, "system document"); };

  auto* moments = app.add_subcommand("moments", "T_s, shifted T_s, I_s, J_s, J1, mixed moments");
  common(moments);
  moments->add_option("--s", c.s);
  moments->add_option("--x,--X", c.X);
  moments->add_option("--Y", c.Y);
  moments->add_option("--H", c.H);
  moments->add_option("--h-range", c.h_range);
  moments->add_option("--factor", c.factors, "kind:cubic:quad:theta:P:exponent[:R]");

  auto* local = app.add_subcommand("local", "singular series, chi_p partials, M(q), p-adic witnesses");
  common(local);
  spec(local);
  local->add_option("--Q", c.Q);
  local->add_option("--q", c.q);
  local->add_option("--p", c.p);
  local->add_option("--t", c.t);

  auto* arch = app.add_subcommand("arch", "oscillatory integrals, singular integral ladder, volume constant");
  common(arch);
  spec(arch);
  arch->add_option("--P", c.P);
  arch->add_option("--ladder", c.ladder)->delimiter(',');
  arch->add_option("--kind", c.kind);
  arch->add_option("--cubic", c.cubic);
  arch->add_option("--quad", c.quad);
  arch->add_option("--beta2,--alpha2", c.alpha2);
  arch->add_option("--beta3,--alpha3", c.alpha3);
  arch->add_option("--theta", c.theta);
  arch->add_option("--samples", c.samples);

  auto* arcs = app.add_subcommand("arcs", "arc membership, Dirichlet approximation, transference, Weyl grids");
  common(arcs);
  spec(arcs);
  arcs->add_option("--Q", c.Q);
  arcs->add_option("--P,--Z", c.P);
  arcs->add_option("--alpha", c.alpha);
  arcs->add_option("--alpha2", c.alpha2);
  arcs->add_option("--alpha3", c.alpha3);
  arcs->add_option("--N", c.N);
  arcs->add_option("--b", c.p);
  arcs->add_option("--r", c.q);
  arcs->add_option("--x,--X", c.X);
  arcs->add_option("--Y", c.Y);
  arcs->add_option("--H", c.H);
  arcs->add_option("--theta", c.theta);
  arcs->add_option("--grid", c.grid);
  arcs->add_option("--samples", c.samples);

  auto* smooth = app.add_subcommand("smooth", "smooth sets and Dickman rho");
  common(smooth);
  smooth->add_option("--x,--X", c.X);
  smooth->add_option("--R", c.R);
  smooth->add_option("--eta", c.eta);
  smooth->add_option("--u-max", c.u_max);
  smooth->add_option("--u-step", c.u_step);

  auto* solve = app.add_subcommand("solve", "anchors, counts, witnesses, predictions, conditions");
  common(solve);
  spec(solve);
  solve->add_option("--B", c.B);
  solve->add_option("--P", c.P);
  solve->add_option("--Q", c.Q);
  solve->add_option("--R", c.R);
  solve->add_option("--eta", c.eta);
  solve->add_option("--p", c.p, "prime bound for conditions");
  solve->add_option("--restriction", c.restriction)->check(CLI::IsMember({"none", "smooth_y", "smooth_x"}));
  solve->add_option("--samples", c.samples);

  auto* verify = app.add_subcommand("verify", "acceptance suite");
  common(verify);
  verify->add_option("--profile", c.profile)->check(CLI::IsMember({"smoke", "desk"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, out);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InvalidInput(e.what());
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string format = config.format.empty() ? default_format(config.subcommand) : config.format;
  std::string op = config.op;
  auto error_doc = [&](const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    j["config"] = config_echo(config, op, format);
    j["versions"] = versions();
    return j;
  };
  auto report_error = [&](const Json& doc, int code) {
    err << "cubquad: " << doc["error"]["message"].get<std::string>() << "\n";
    try {
      emit(config, out, doc.dump(2) + "\n");
    } catch (const std::exception&) {
      out << doc.dump(2) << "\n";
    }
    return code;
  };
  try {
    if (config.max_entries <= 0 || config.max_work <= 0 || config.max_cells <= 0)
      throw InvalidInput("budget caps must be positive");
    if (format != "csv" && format != "json") throw InvalidInput("format must be csv or json");
    Artifact a;
    const auto& sub = config.subcommand;
    if (sub == "moments")
      a = cmd_moments(config, op);
    else if (sub == "local")
      a = cmd_local(config, op);
    else if (sub == "arch")
      a = cmd_arch(config, op);
    else if (sub == "arcs")
      a = cmd_arcs(config, op);
    else if (sub == "smooth")
      a = cmd_smooth(config, op);
    else if (sub == "solve")
      a = cmd_solve(config, op);
    else if (sub == "verify")
      a = cmd_verify(config, op, err);
    else
      throw InvalidInput("unknown subcommand '" + sub + "'");

    const Json echo = config_echo(config, op, format);
    if (format == "csv") {
      if (!a.table) throw InvalidInput(sub + " " + op + " has no CSV form; use --format json");
      std::ostringstream os;
      write_csv(os, *a.table, Json{{"config", echo}, {"versions", versions()}});
      emit(config, out, os.str());
    } else {
      Json doc;
      doc["config"] = echo;
      doc["versions"] = versions();
      doc["result"] = a.result;
      emit(config, out, doc.dump(2) + "\n");
    }
    return a.failed ? ExitCode::failure : ExitCode::ok;
  } catch (const BudgetExceeded& e) {
    auto doc = error_doc("budget_exceeded", e.what());
    doc["error"]["estimate"] = e.estimate();
    doc["error"]["cap"] = e.cap();
    return report_error(doc, ExitCode::budget_refusal);
  } catch (const InvalidInput& e) {
    return report_error(error_doc("invalid_input", e.what()), ExitCode::config_error);
  } catch (const NumericalFailure& e) {
    return report_error(error_doc("numerical_failure", e.what()), ExitCode::failure);
  } catch (const std::exception& e) {
    return report_error(error_doc("failure", e.what()), ExitCode::failure);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const InvalidInput& e) {
    Json j;
    j["error"] = {{"kind", "invalid_input"}, {"message", e.what()}};
    j["versions"] = versions();
    err << "cubquad: " << e.what() << "\n";
    out << j.dump(2) << "\n";
    return ExitCode::config_error;
  }
  if (!config) return ExitCode::ok;
  return run(*config, out, err);
}

}  // namespace cubquad::cli
