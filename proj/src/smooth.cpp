#include "cubquad/smooth.hpp"

#include <algorithm>
#include <cmath>

#include "cubquad/error.hpp"

namespace cubquad {

bool SmoothSet::contains(std::int64_t n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

std::vector<std::int32_t> largest_prime_factors(std::int64_t N) {
  if (N < 0 || N > (std::int64_t{1} << 31)) throw InvalidInput("sieve bound out of range");
  std::vector<std::int32_t> lpf(static_cast<std::size_t>(N + 1), 0);
  if (N >= 1) lpf[1] = 1;
  for (std::int64_t p = 2; p <= N; ++p) {
    if (lpf[p] != 0) continue;  // composite: already has a smaller prime recorded
    for (std::int64_t k = p; k <= N; k += p) lpf[k] = static_cast<std::int32_t>(p);
  }
  return lpf;
}

SmoothSet smooth_set(std::int64_t X, std::int64_t R) {
  if (X < 1) throw InvalidInput("smooth_set: X must be >= 1");
  if (R < 2) throw InvalidInput("smooth_set: R must be >= 2");
  SmoothSet out{X, R, {}};
  if (R >= X) {
    out.members.resize(static_cast<std::size_t>(X));
    for (std::int64_t n = 1; n <= X; ++n) out.members[n - 1] = n;
    return out;
  }
  const auto lpf = largest_prime_factors(X);
  for (std::int64_t n = 1; n <= X; ++n)
    if (lpf[n] <= R) out.members.push_back(n);
  return out;
}

std::int64_t smooth_bound(double P, double eta) {
  if (!(P >= 1) || !(eta > 0)) throw InvalidInput("smooth_bound: need P >= 1 and eta > 0");
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(std::pow(P, eta) - 1e-12)));
}

DickmanTable::DickmanTable(double step, double max_u) : step_(step), max_u_(max_u) {
  const double per = 1.0 / step;
  per_unit_ = static_cast<std::int64_t>(std::llround(per));
  if (per_unit_ < 1 || std::abs(per - static_cast<double>(per_unit_)) > 1e-9)
    throw InvalidInput("Dickman step must divide 1");
  const auto n = static_cast<std::int64_t>(std::ceil(max_u * per_unit_));
  rho_.assign(static_cast<std::size_t>(n + 1), 1.0);
  const double h = 1.0 / static_cast<double>(per_unit_);
  // u rho(u) = int_{u-1}^{u} rho: trapezoid over the window, solved for the
  // newest node, so every value is a positive average of earlier ones
  double inner = static_cast<double>(per_unit_ - 1);  // rho at k-N+1 .. k-1
  for (std::int64_t k = per_unit_ + 1; k <= n; ++k) {
    const double u = static_cast<double>(k) * h;
    const double w = h / u;
    rho_[k] = w * (0.5 * rho_[k - per_unit_] + inner) / (1.0 - 0.5 * w);
    inner += rho_[k] - rho_[k - per_unit_ + 1];
  }
  max_u_ = static_cast<double>(n) * h;
}

const DickmanTable& DickmanTable::standard() {
  static const DickmanTable table;
  return table;
}

double DickmanTable::operator()(double u) const {
  if (!(u >= 0) || u > max_u_) throw InvalidInput("dickman_rho: u outside [0, " + std::to_string(max_u_) + "]");
  if (u <= 1.0) return 1.0;
  const double x = u * static_cast<double>(per_unit_);
  auto k = static_cast<std::int64_t>(std::floor(x));
  if (k >= static_cast<std::int64_t>(rho_.size()) - 1) return rho_.back();
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * rho_[k] + w * rho_[k + 1];
}

DickmanValue dickman_rho(double u) { return {u, DickmanTable::standard()(u)}; }

double smooth_density_constant(double eta) {
  if (!(eta > 0)) throw InvalidInput("eta must be positive");
  return dickman_rho(1.0 / eta).rho;
}

}  // namespace cubquad
