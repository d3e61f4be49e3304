#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubquad/archimedean.hpp"
#include "cubquad/arcs.hpp"
#include "cubquad/cli.hpp"
#include "cubquad/error.hpp"
#include "cubquad/expsums.hpp"
#include "cubquad/local.hpp"
#include "cubquad/moments.hpp"
#include "cubquad/smooth.hpp"
#include "cubquad/solver.hpp"
#include "cubquad/system.hpp"

namespace py = pybind11;
using namespace cubquad;

namespace {

// exact counts cross the boundary as Python ints
py::object to_py(BigCount v) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(to_decimal(v).c_str(), nullptr, 10))); }

LedgerBudget budget(double max_entries, double max_work) { return {max_entries, max_work}; }

py::dict count_dict(const SolutionCount& c) {
  py::dict d;
  d["style"] = c.style;
  d["bound"] = c.bound;
  d["restriction"] = to_string(c.restriction);
  d["count"] = to_py(c.count);
  d["witnesses"] = c.witnesses;
  d["witnesses_exhausted"] = c.witnesses_exhausted;
  return d;
}

Restriction restriction_of(const std::string& r) {
  if (r == "none") return Restriction::none;
  if (r == "smooth_y") return Restriction::smooth_y;
  if (r == "smooth_x") return Restriction::smooth_x;
  throw InvalidInput("restriction must be none, smooth_y or smooth_x");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cubic-quadratic diagonal systems: exact counts, local and archimedean factors";
  m.attr("__version__") = cli::kVersion;

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<DiagonalSystem>(m, "DiagonalSystem")
      .def(py::init<std::vector<std::int64_t>, std::vector<std::int64_t>, std::vector<std::int64_t>,
                    std::vector<std::int64_t>>(),
           py::arg("a"), py::arg("b"), py::arg("c") = std::vector<std::int64_t>{},
           py::arg("d") = std::vector<std::int64_t>{})
      .def_property_readonly("a", &DiagonalSystem::a)
      .def_property_readonly("b", &DiagonalSystem::b)
      .def_property_readonly("c", &DiagonalSystem::c)
      .def_property_readonly("d", &DiagonalSystem::d)
      .def_property_readonly("l", &DiagonalSystem::l)
      .def_property_readonly("m", &DiagonalSystem::m)
      .def_property_readonly("n", &DiagonalSystem::n)
      .def_property_readonly("s", &DiagonalSystem::s)
      .def_property_readonly("t", &DiagonalSystem::t)
      .def_property_readonly("system_class", [](const DiagonalSystem& s) { return std::string(to_string(classify(s))); })
      .def("solves", [](const DiagonalSystem& s, const std::vector<std::int64_t>& x) { return s.solves(x); })
      .def("__eq__", [](const DiagonalSystem& a, const DiagonalSystem& b) { return a == b; })
      .def("__repr__", [](const DiagonalSystem& s) { return "DiagonalSystem(\n" + format_system(s) + ")"; });
  m.def("parse_system", [](const std::string& text) { return parse_system(text); });
  m.def("load_system", &load_system);
  m.def("format_system", &format_system);
  m.def("balanced_sample_system", &balanced_sample_system);

  m.def("weyl_sum", [](double a, double b, std::int64_t X) { return weyl_sum(a, b, X).value(); }, py::arg("alpha"),
        py::arg("beta"), py::arg("X"));
  m.def("vinogradov_sum", [](double a1, double a2, double a3, std::int64_t X) { return vinogradov_sum(a1, a2, a3, X).value(); });
  m.def("block_sum", [](double a1, double a2, double a3, std::int64_t Y, std::int64_t H, bool starred) {
        return block_sum(a1, a2, a3, Y, H, starred).value();
      }, py::arg("a1"), py::arg("a2"), py::arg("a3"), py::arg("Y"), py::arg("H"), py::arg("starred") = false);

  const double E = LedgerBudget{}.max_entries, W = LedgerBudget{}.max_work;
  m.def("moment_T", [](int s, std::int64_t X, double e, double w) { return to_py(moment_T(s, X, budget(e, w)).value); },
        py::arg("s"), py::arg("X"), py::arg("max_entries") = E, py::arg("max_work") = W);
  m.def("moment_T_shifted", [](int s, std::int64_t X, std::int64_t h, double e, double w) {
        return to_py(moment_T_shifted(s, X, h, budget(e, w)).value);
      }, py::arg("s"), py::arg("X"), py::arg("h_range"), py::arg("max_entries") = E, py::arg("max_work") = W);
  m.def("moment_I", [](int s, std::int64_t Y, std::int64_t H, double e, double w) {
        return to_py(moment_I(s, Y, H, budget(e, w)).value);
      }, py::arg("s"), py::arg("Y"), py::arg("H"), py::arg("max_entries") = E, py::arg("max_work") = W);
  m.def("moment_J", [](int s, std::int64_t X, double e, double w) { return to_py(moment_J(s, X, budget(e, w)).value); },
        py::arg("s"), py::arg("X"), py::arg("max_entries") = E, py::arg("max_work") = W);
  m.def("count_J1", [](std::int64_t Y, std::int64_t H) { return to_py(count_J1(Y, H).value); }, py::arg("Y"), py::arg("H"));
  m.def("classify_I2", [](std::int64_t Y, std::int64_t H) {
    const auto c = classify_I2(Y, H);
    py::dict d;
    d["total"] = to_py(c.total);
    d["T0"] = to_py(c.T0);
    d["T1"] = to_py(c.T1);
    d["T2"] = to_py(c.T2);
    d["identity_violations"] = to_py(c.identity_violations);
    return d;
  });
  m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& series) {
    const auto f = fit_exponent(series);
    return py::make_tuple(f.slope, f.intercept, f.residual);
  });

  m.def("smooth_set", [](std::int64_t X, std::int64_t R) { return smooth_set(X, R).members; });
  m.def("dickman_rho", [](double u) { return dickman_rho(u).rho; });

  m.def("dirichlet_approx", [](double alpha, std::int64_t N) {
    const auto r = dirichlet_approx(alpha, N);
    return py::make_tuple(r.a, r.q, r.error);
  });
  m.def("transfer_lambda", &transfer_lambda, py::arg("alpha"), py::arg("b"), py::arg("r"), py::arg("Z"));
  m.def("major_arc_witness", [](double a2, double a3, double Q, double P, std::int64_t t, bool homogeneous) -> py::object {
        const auto mem = membership(a2, a3, ArcFamily{Q, P, t, homogeneous});
        if (!mem.inside) return py::none();
        return py::make_tuple(mem.witness->q, mem.witness->r2, mem.witness->r3);
      }, py::arg("alpha2"), py::arg("alpha3"), py::arg("Q"), py::arg("P"), py::arg("t") = 1, py::arg("homogeneous") = true);

  m.def("complete_sum", [](const std::string& kind, std::int64_t q, std::int64_t r2, std::int64_t r3, std::int64_t cubic,
                           std::int64_t quad) {
    const SumKind k = kind == "f" ? SumKind::f : kind == "g" ? SumKind::g : kind == "h" ? SumKind::h
                                                                                        : throw InvalidInput("kind must be f, g or h");
    return complete_sum(k, q, r2, r3, cubic, quad).value;
  });
  m.def("singular_series", [](const DiagonalSystem& sys, std::int64_t Q) {
    const auto r = singular_series(sys, Q);
    py::dict d;
    d["value"] = r.value;
    d["partial"] = r.partial;
    d["A"] = r.A;
    return d;
  });
  m.def("chi_p_partial", [](const DiagonalSystem& sys, std::int64_t p, int t) {
    const auto c = chi_p_partial(sys, p, t);
    return py::make_tuple(c.series_side, c.count_side, to_py(c.M));
  });
  m.def("count_congruences", [](const DiagonalSystem& sys, std::int64_t q) { return to_py(count_congruences(sys, q).M); });

  py::class_<RealAnchor>(m, "RealAnchor")
      .def_readonly("theta", &RealAnchor::theta)
      .def_readonly("flips", &RealAnchor::flips)
      .def_readonly("normalized", &RealAnchor::normalized)
      .def_readonly("residual_theta", &RealAnchor::residual_theta)
      .def_readonly("residual_phi", &RealAnchor::residual_phi)
      .def_readonly("sigma_min", &RealAnchor::sigma_min)
      .def_readonly("jacobian_rank", &RealAnchor::jacobian_rank)
      .def_property_readonly("nonsingular", &RealAnchor::nonsingular);
  m.def("find_real_anchor", [](const DiagonalSystem& sys, std::uint64_t seed) {
        AnchorOptions o;
        o.seed = seed;
        return find_real_anchor(sys, o);
      }, py::arg("system"), py::arg("seed") = AnchorOptions{}.seed);
  m.def("count_solutions", [](const DiagonalSystem& sys, std::int64_t B) { return count_dict(count_solutions(sys, B)); },
        py::arg("system"), py::arg("B"));
  m.def("count_box_solutions", [](const RealAnchor& a, double P, const std::string& restriction, std::int64_t R) {
        return count_dict(count_solutions(a, P, restriction_of(restriction), R));
      }, py::arg("anchor"), py::arg("P"), py::arg("restriction") = "none", py::arg("R") = 0);
  m.def("search_witness", [](const DiagonalSystem& sys, std::int64_t B) { return search_witness(sys, B); });

  m.def("singular_integral", [](const DiagonalSystem& sys, const std::vector<double>& theta, double P,
                                const std::vector<double>& ladder) {
        SingularIntegralOptions o;
        o.ladder = ladder;
        const auto r = singular_integral(sys, theta, P, o);
        py::dict d;
        d["Q"] = r.Q;
        d["J"] = r.J;
        d["scaled"] = r.scaled;
        d["tail_ratios"] = r.tail_ratios;
        d["error_estimate"] = r.error_estimate;
        return d;
      }, py::arg("system"), py::arg("theta"), py::arg("P"), py::arg("ladder") = SingularIntegralOptions{}.ladder);
  m.def("volume_constant", [](const DiagonalSystem& sys, const std::vector<double>& theta, std::size_t samples,
                              std::uint64_t seed) {
        VolumeOptions o;
        o.samples = samples;
        o.shell_samples = samples / 2;
        o.seed = seed;
        const auto v = volume_constant(sys, theta, o);
        return py::make_tuple(v.C, v.stderr_);
      }, py::arg("system"), py::arg("theta"), py::arg("samples") = VolumeOptions{}.samples,
      py::arg("seed") = VolumeOptions{}.seed);
}
