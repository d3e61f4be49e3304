#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cubquad/expsums.hpp"

namespace cubquad {

/// Major arcs of height Q at scale P:
///   homogeneous    |q alpha_i - r_i| <= Q / Xi_i
///   inhomogeneous  |alpha_i - r_i/q| <= Q / Xi_i
/// over 0 <= r_i <= q <= Q with gcd(q, r2, r3) = 1, where Xi_i = 18 t P^i.
struct ArcFamily {
  double Q = 1;
  double P = 1;
  std::int64_t t = 1;
  bool homogeneous = true;

  double xi2() const { return 18.0 * static_cast<double>(t) * P * P; }
  double xi3() const { return 18.0 * static_cast<double>(t) * P * P * P; }
};

struct ArcWitness {
  std::int64_t q = 1;
  std::int64_t r2 = 0;
  std::int64_t r3 = 0;
  bool operator==(const ArcWitness&) const = default;
};

struct ArcMembership {
  bool inside = false;
  std::optional<ArcWitness> witness;
};

/// First witness in (q, r2, r3) lexicographic order, if any.
ArcMembership membership(double alpha2, double alpha3, const ArcFamily& fam);

/// Every witness (used to test disjointness).
std::vector<ArcWitness> all_witnesses(double alpha2, double alpha3, const ArcFamily& fam);

struct RationalApproximation {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double error = 0;  // |q alpha - a|
};

/// Last continued-fraction convergent a/q of alpha with q <= N; then
/// |q alpha - a| < 1/N. The expansion is exact on the binary value of alpha.
RationalApproximation dirichlet_approx(double alpha, std::int64_t N);

/// lambda = r + Z |r alpha - b|; requires gcd(b, r) = 1.
double transfer_lambda(double alpha, std::int64_t b, std::int64_t r, double Z);

struct TransferReport {
  double C1 = 0;  // fitted: max Psi / (X (1/q + 1/Y + q/Z)^theta) over admissible a/q
  double C2 = 0;  // 4^theta C1
  double worst_ratio = 0;     // max Psi / (C2 X (1/lambda + 1/Y + lambda/Z)^theta)
  double worst_constant = 0;  // same without C2
  double worst_alpha = 0;
  std::int64_t worst_b = 0;
  std::int64_t worst_r = 1;
  std::size_t violations = 0;  // pairs with worst_ratio > 1
  std::size_t pairs_checked = 0;
};

struct TransferParams {
  double X = 1, Y = 1, Z = 1, theta = 0.5;
  std::optional<double> C1;     // fitted from the samples when absent
  std::int64_t q_max = 0;       // hypothesis search bound (0: ceil(2Z))
  std::int64_t r_max = 0;       // (b, r) test set bound (0: ceil(2Z))
};

/// Checks Psi(alpha) <= C2 X (1/lambda + 1/Y + lambda/Z)^theta for every
/// sample and every coprime (b, r) with r <= r_max and b adjacent to r alpha.
TransferReport transfer_bound_check(const std::vector<std::pair<double, double>>& samples, const TransferParams& p);

struct WeylCheckReport {
  double max_scaled = 0;  // max |f| Q^{1/3} / P^{1 + eps}
  double max_abs = 0;
  std::size_t evaluated = 0;
  std::size_t rejected = 0;  // draws inside the major arcs
  double box_length = 0;
  bool exceeds_ceiling = false;
};

/// Samples points outside the homogeneous major arcs of height Q and
/// records the largest normalized |f_i|.
WeylCheckReport minor_arc_weyl_check(const BoxSumSpec& spec, double Q, double P, std::size_t samples,
                                     std::mt19937_64& rng, double eps = 0.05, double ceiling = 1e9);

}  // namespace cubquad
