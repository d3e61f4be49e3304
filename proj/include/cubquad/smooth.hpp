#pragma once

#include <cstdint>
#include <vector>

namespace cubquad {

/// A(X, R): integers 1 <= n <= X all of whose prime factors are <= R.
/// The condition is vacuous for n = 1, so 1 is always a member.
struct SmoothSet {
  std::int64_t X = 0;
  std::int64_t R = 0;
  std::vector<std::int64_t> members;  // sorted ascending

  bool contains(std::int64_t n) const;
  std::size_t size() const { return members.size(); }
};

SmoothSet smooth_set(std::int64_t X, std::int64_t R);

/// Largest prime factor of every n <= N (entry 1 is 1, entry 0 is 0).
std::vector<std::int32_t> largest_prime_factors(std::int64_t N);

/// R = ceil(P^eta), the smoothness bound tied to a scale P.
std::int64_t smooth_bound(double P, double eta);

struct DickmanValue {
  double u = 0;
  double rho = 1;
};

/// Dickman's function on a uniform grid from
///   rho(u) = 1 on [0, 1],   u rho(u) = int_{u-1}^{u} rho(t) dt
/// with the trapezoidal rule over the window (grid aligned with the
/// integers, so the kinks at u = 1, 2, ... sit on nodes). Values between
/// nodes are interpolated linearly.
class DickmanTable {
 public:
  explicit DickmanTable(double step = 1e-4, double max_u = 20.0);

  /// Shared table with the default step; built once, read-only afterwards.
  static const DickmanTable& standard();

  double operator()(double u) const;
  double step() const noexcept { return step_; }
  double max_u() const noexcept { return max_u_; }

 private:
  double step_;
  double max_u_;
  std::int64_t per_unit_;
  std::vector<double> rho_;
};

/// rho(u) for 0 <= u <= 20; absolute error below 1e-8.
DickmanValue dickman_rho(double u);

/// c_eta = rho(1/eta), the density of P^eta-smooth integers near P.
double smooth_density_constant(double eta);

}  // namespace cubquad
