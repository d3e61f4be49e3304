#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "cubquad/bigcount.hpp"
#include "cubquad/expsums.hpp"
#include "cubquad/system.hpp"

namespace cubquad {

/// e(k/q) for k = 0..q-1.
class RootTable {
 public:
  explicit RootTable(std::int64_t q);
  std::int64_t modulus() const noexcept { return q_; }
  const std::complex<double>& operator[](std::int64_t k) const { return roots_[static_cast<std::size_t>(k)]; }

 private:
  std::int64_t q_;
  std::vector<std::complex<double>> roots_;
};

/// S(A, B) = sum_{u=1}^q e_q(A u^3 + B u^2) for every residue pair, built in
/// O(q^3) using S(-A, B) = S(A, B).
class CompleteSumTable {
 public:
  explicit CompleteSumTable(std::int64_t q);
  std::int64_t modulus() const noexcept { return q_; }
  std::complex<double> operator()(std::int64_t A, std::int64_t B) const;

 private:
  std::int64_t q_;
  std::vector<std::complex<double>> values_;  // (A, B) with 0 <= A <= q/2
};

struct CompleteSum {
  SumKind kind = SumKind::f;
  std::int64_t q = 1;
  std::int64_t r2 = 0;
  std::int64_t r3 = 0;
  std::complex<double> value{1, 0};
};

/// sum_{u=1}^q e_q(cubic r3 u^3 + quad r2 u^2), with the kind deciding
/// which of the two terms is present (f both, g cubic, h quadratic).
CompleteSum complete_sum(SumKind kind, std::int64_t q, std::int64_t r2, std::int64_t r3, std::int64_t cubic,
                         std::int64_t quad);

/// T(q, r) = q^{-s} prod of the l + m + n complete sums of the system.
std::complex<double> t_factor(const DiagonalSystem& sys, std::int64_t q, std::int64_t r2, std::int64_t r3);

/// Sums over 1 <= r2, r3 <= q with gcd(q, r2, r3) = 1:
///   B(q) = sum T(q, r)     A(q) = sum |T(q, r)|
struct LocalSums {
  double A = 0;
  std::complex<double> B{0, 0};
};

LocalSums local_sums(const DiagonalSystem& sys, std::int64_t q);

enum class SeriesMode { multiplicative, direct };

struct SingularSeriesReport {
  std::int64_t Q = 1;
  SeriesMode mode = SeriesMode::multiplicative;
  std::vector<double> A;        // A[q], index 0 unused
  std::vector<double> B;        // Re B[q] (B is real by r -> -r symmetry)
  std::vector<double> B_imag;   // Im B[q], kept as a diagnostic
  std::vector<double> partial;  // partial[q] = S(q)
  double value = 0;             // S(Q)
};

/// Truncated singular series S(Q) = sum_{q <= Q} B(q). The multiplicative
/// mode evaluates B at prime powers only; the direct mode evaluates every q.
SingularSeriesReport singular_series(const DiagonalSystem& sys, std::int64_t Q,
                                     SeriesMode mode = SeriesMode::multiplicative, std::int64_t cap = 500);

struct SeriesTail {
  std::vector<std::int64_t> ladder;
  std::vector<double> values;       // S(Q_k)
  std::vector<double> differences;  // |S(Q_{k+1}) - S(Q_k)|
  std::vector<double> scaled;       // differences[k] / Q_k^{-1/6}
};

SeriesTail series_tail(const SingularSeriesReport& rep, const std::vector<std::int64_t>& ladder);

struct ChiPartial {
  std::int64_t p = 2;
  int t = 0;
  double series_side = 1;  // sum_{h <= t} B(p^h)
  double count_side = 1;   // p^{-t(s-2)} M(p^t)
  BigCount M = 1;
  double relative_difference = 0;
};

/// Both sides of sum_{h<=t} B(p^h) = p^{-t(s-2)} M(p^t).
ChiPartial chi_p_partial(const DiagonalSystem& sys, std::int64_t p, int t);

struct CongruenceCount {
  std::int64_t q = 1;
  BigCount M = 1;
};

/// M(q): residue tuples mod q with Theta = Phi = 0 (mod q), by matching the
/// residue ledgers of two halves of the variables.
CongruenceCount count_congruences(const DiagonalSystem& sys, std::int64_t q, double max_cells = 1e7);

struct LiftingCheck {
  int t = 0;
  BigCount M = 0;
  double log_p_M = 0;  // log_p M(p^t)
};

struct PadicWitness {
  std::int64_t p = 2;
  bool found = false;
  std::vector<std::int64_t> solution;  // residues mod p^k in variable order
  int k = 0;                           // modulus exponent
  int minor_valuation = 0;             // valuation of the best 2x2 Jacobian minor
  std::pair<std::size_t, std::size_t> minor_columns{0, 0};
  std::optional<int> w_estimate;       // smallest w with M(p^t) >= p^{(t-w)(s-2)} on the checked t
  std::vector<LiftingCheck> checks;
};

struct PadicOptions {
  int max_k = 6;
  double exhaustive_limit = 2e6;  // residue tuples enumerated exhaustively
  std::size_t random_trials = 200000;
  double search_cells = 2e7;      // lift checks per level in the randomized mode
  std::uint64_t seed = 1;
  double count_cells = 1e6;       // budget for the M(p^t) checks
  int max_t = 4;
};

/// A solution mod p^k with a 2x2 Jacobian minor of valuation v, k >= 2v + 1,
/// and some coordinate nonzero mod p^{k-v}: Hensel lifts it to a nonzero
/// p-adic solution.
PadicWitness padic_witness(const DiagonalSystem& sys, std::int64_t p, const PadicOptions& opts = {});

bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

}  // namespace cubquad
