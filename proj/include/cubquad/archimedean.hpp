#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cubquad/arcs.hpp"
#include "cubquad/expsums.hpp"
#include "cubquad/system.hpp"

namespace cubquad {

struct QuadratureOptions {
  double rel_tol = 1e-9;             // relative to the box length
  std::size_t max_panels = 4000000;  // including bisections
};

struct OscillatoryValue {
  SumKind kind = SumKind::f;
  double beta2 = 0, beta3 = 0, P = 1, theta = 0.25;
  std::complex<double> value{0, 0};
  double error_estimate = 0;
  std::size_t panels = 0;
};

/// v(beta) = int_{theta P/2}^{2 theta P} e(cubic beta3 g^3 + quad beta2 g^2) dg
/// (f both terms, g cubic only, h quadratic only), by Gauss-Kronrod panels no
/// wider than a quarter period of the local phase.
OscillatoryValue oscillatory_v(SumKind kind, double beta2, double beta3, double P, double theta, std::int64_t cubic,
                               std::int64_t quad, const QuadratureOptions& opts = {});

/// Kind of variable i of the system (f shared, g pure cubic, h pure quadratic).
SumKind variable_kind(const DiagonalSystem& sys, std::size_t i);

/// V(beta) = product of the s oscillatory integrals at the anchor boxes.
std::complex<double> product_v(const DiagonalSystem& sys, std::span<const double> theta, double beta2, double beta3,
                               double P, const QuadratureOptions& opts = {});

struct SingularIntegralOptions {
  std::vector<double> ladder{2, 4, 8, 16, 32};  // heights Q, ascending
  int order = 8;                                // Gauss-Legendre points per cell side
  double cells_per_cycle = 1.0;                 // cell density against the integrand's frequency
  double tol = 1e-7;                            // relative agreement between two resolutions
  int max_refinements = 3;
};

struct SingularIntegralReport {
  double P = 1;
  std::vector<double> Q;
  std::vector<double> J;            // J(Q)
  std::vector<double> scaled;       // J(Q) / P^{s-5}
  std::vector<double> imag;         // imaginary part of the box integral (should vanish)
  std::vector<double> differences;  // scaled[k+1] - scaled[k]
  std::vector<double> tail_ratios;  // |differences[k+1] / differences[k]|
  double error_estimate = 0;        // largest |coarse - fine| over the ladder, scaled units
  std::size_t nodes = 0;            // 2-D nodes of the accepted resolution
  int order = 0;
};

/// J(Q) = int_{|beta3| <= Q/P^3} int_{|beta2| <= Q/P^2} V(beta) dbeta for every Q
/// of the ladder. V(-beta) = conj V(beta), so the half-plane beta3 >= 0 is
/// integrated and doubled. Tensor Gauss-Legendre cells are sized by the
/// largest frequency of V in each direction; the order is raised until two
/// resolutions agree.
SingularIntegralReport singular_integral(const DiagonalSystem& sys, std::span<const double> theta, double P,
                                         const SingularIntegralOptions& opts = {});

struct IntegralLimit {
  double value = 0;  // lim J(Q) / P^{s-5}
  double error = 0;
  double ratio = 0;  // geometric ratio used for the tail
};

/// Geometric-tail extrapolation of the scaled ladder: the last dyadic
/// difference continued with the last observed tail ratio. The error is the
/// shift against the same extrapolation one rung earlier (or the whole tail
/// when only three rungs exist), plus the quadrature error.
IntegralLimit extrapolate_limit(const SingularIntegralReport& rep);

struct VolumeLevel {
  double delta = 0;
  double C = 0;
  double stderr_ = 0;
  std::size_t hits = 0;
};

struct VolumeEstimate {
  double C = 0;
  double stderr_ = 0;
  std::vector<VolumeLevel> levels;  // thin-shell estimates, widest first
  bool stable = false;              // every shell level agrees with C within 3 combined errors
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::pair<std::size_t, std::size_t> pair{0, 0};  // conditioning coordinates (j, k)
};

struct VolumeOptions {
  std::size_t samples = 2000000;        // slices for the co-area estimate
  std::size_t shell_samples = 1000000;  // per shell width
  std::uint64_t seed = 20240601;
  double delta = 4e-3;                  // initial shell half-width, relative to the form scales
  int levels = 3;                       // delta, delta/2, ...
};

/// C = int over B of delta(Theta) delta(Phi), B = prod [theta_i/2, 2 theta_i]
/// (unit-scaled). Monte Carlo over all coordinates but two (j, k); on each
/// slice the zeros of (Theta, Phi) in (t_j, t_k) are found exactly (t_k from
/// Phi, t_j by bracketing) and weighted by 1/|minor_jk|. Thin shells
/// |Theta| < d1, |Phi| < d2 divided by 4 d1 d2 are reported alongside.
VolumeEstimate volume_constant(const DiagonalSystem& sys, std::span<const double> theta,
                               const VolumeOptions& opts = {});

struct StarApprox {
  bool on_major_arc = false;
  ArcWitness witness;
  std::complex<double> value{0, 0};
};

/// f*(alpha) = q^{-1} S(q, r) v(alpha - r/q) for variable `index`, on the
/// homogeneous major arcs of height P; zero elsewhere.
StarApprox star_approx(const DiagonalSystem& sys, std::span<const double> theta, std::size_t index, double alpha2,
                       double alpha3, double P, const QuadratureOptions& opts = {});

}  // namespace cubquad
