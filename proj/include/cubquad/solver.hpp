#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubquad/archimedean.hpp"
#include "cubquad/bigcount.hpp"
#include "cubquad/ledger.hpp"
#include "cubquad/local.hpp"
#include "cubquad/system.hpp"

namespace cubquad {

/// A real zero theta of (Theta, Phi) with every component in (0, 1/2), after
/// the sign normalization x_i -> -x_i (a_i -> -a_i), y_j -> -y_j (c_j -> -c_j).
struct RealAnchor {
  std::vector<double> theta;
  std::vector<int> flips;         // -1 where the variable was negated
  DiagonalSystem normalized;      // the system after the flips
  double residual_theta = 0, residual_phi = 0;
  double sigma_min = 0, sigma_max = 0;  // singular values of the 2 x s Jacobian
  int jacobian_rank = 0;
  bool nonsingular() const { return jacobian_rank == 2; }
};

struct AnchorOptions {
  std::size_t random_starts = 200;
  std::uint64_t seed = 7;
  int grid_per_axis = 3;          // deterministic fallback grid (capped at 3^s <= 2e5 points)
  double residual_tol = 1e-10;
  double sigma_tol = 1e-6;
  double lower = 0.02, upper = 0.48;  // accepted range of the normalized components
};

/// Multi-start damped minimal-norm Newton on (Theta, Phi) = 0: the centroid
/// start, then random starts, then a grid. Zeros are rescaled into the box
/// (the forms are homogeneous) and sign-normalized. Returns the first
/// nonsingular anchor; failing that, a singular real zero (rank < 2) if one
/// was met; otherwise nothing.
std::optional<RealAnchor> find_real_anchor(const DiagonalSystem& sys, const AnchorOptions& opts = {});

enum class Restriction { none, smooth_y, smooth_x };
std::string to_string(Restriction r);

using Solution = std::vector<std::int64_t>;

struct SolutionCount {
  std::string style;             // "N" (|x_i| <= B) or "R" (anchor boxes at scale P)
  double bound = 0;              // B or P
  Restriction restriction = Restriction::none;
  std::int64_t smooth_R = 0;     // smoothness bound when restricted
  BigCount count = 0;
  std::vector<Solution> witnesses;  // nonzero, in the witness order, at most 10
  bool witnesses_exhausted = true;  // false when the witness search hit its budget
};

struct CountOptions {
  LedgerBudget budget{};
  std::size_t max_witnesses = 10;
  double witness_left_cap = 2e6;    // stored half of the witness search
  double witness_right_cap = 5e7;   // streamed half
};

/// N(B): integer solutions with every |x_i| <= B, the zero solution included.
SolutionCount count_solutions(const DiagonalSystem& sys, std::int64_t B, const CountOptions& opts = {});

/// R(P), R*(P) or R†(P) on the normalized system of the anchor: x_i in
/// (theta_i P/2, 2 theta_i P], with y_j (smooth_y) or the last shared
/// variable (smooth_x) restricted to A(P, R).
SolutionCount count_solutions(const RealAnchor& anchor, double P, Restriction restriction = Restriction::none,
                              std::int64_t R = 0, const CountOptions& opts = {});

/// Smallest nonzero solution with |x_i| <= B, ordered by height max|x_i|
/// first and then lexicographically with 0 < 1 < -1 < 2 < -2 < ...
std::optional<Solution> search_witness(const DiagonalSystem& sys, std::int64_t B, const CountOptions& opts = {});

struct PredictionOptions {
  std::int64_t series_Q = 50;
  VolumeOptions volume{};
  std::int64_t smooth_R = 0;   // required for restricted counts
  double eta = 0;              // c_eta = rho(1/eta); 0 derives eta from R and P
  CountOptions count{};
};

struct PredictionReport {
  double P = 0;
  Restriction restriction = Restriction::none;
  BigCount observed = 0;
  double C = 0, C_stderr = 0;
  double series = 0;           // S(Q)
  std::int64_t series_Q = 0;
  double smooth_factor = 1;    // c_eta^m, c_eta or 1
  double prediction = 0;       // smooth_factor C S P^{s-5}
  double ratio = 0;            // observed / prediction
};

/// Compares R(P) (or a restricted count) with smooth_factor * C * S(Q) * P^{s-5}.
/// Refuses unclassified systems and singular anchors.
PredictionReport predict_and_compare(const RealAnchor& anchor, const DiagonalSystem& original, double P,
                                     Restriction restriction = Restriction::none, const PredictionOptions& opts = {});

}  // namespace cubquad
