#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cubquad {

/// The pair of diagonal forms
///
///   Theta(x, y) = a_1 x_1^3 + ... + a_l x_l^3 + c_1 y_1^3 + ... + c_m y_m^3
///   Phi(x, z)   = b_1 x_1^2 + ... + b_l x_l^2 + d_1 z_1^2 + ... + d_n z_n^2
///
/// Variables are ordered x_1..x_l, y_1..y_m, z_1..z_n throughout the library.
class DiagonalSystem {
 public:
  DiagonalSystem() = default;

  /// Validates: |a| == |b|, every coefficient nonzero, s >= 1.
  DiagonalSystem(std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                 std::vector<std::int64_t> c, std::vector<std::int64_t> d);

  const std::vector<std::int64_t>& a() const noexcept { return a_; }
  const std::vector<std::int64_t>& b() const noexcept { return b_; }
  const std::vector<std::int64_t>& c() const noexcept { return c_; }
  const std::vector<std::int64_t>& d() const noexcept { return d_; }

  std::size_t l() const noexcept { return a_.size(); }
  std::size_t m() const noexcept { return c_.size(); }
  std::size_t n() const noexcept { return d_.size(); }
  std::size_t s() const noexcept { return l() + m() + n(); }
  /// Largest absolute coefficient.
  std::int64_t t() const noexcept { return t_; }

  /// Cubic and quadratic coefficient of variable i (0 where the variable is absent).
  std::int64_t cubic_coef(std::size_t i) const;
  std::int64_t quad_coef(std::size_t i) const;

  __int128 theta(std::span<const std::int64_t> vars) const;
  __int128 phi(std::span<const std::int64_t> vars) const;
  bool solves(std::span<const std::int64_t> vars) const { return theta(vars) == 0 && phi(vars) == 0; }

  double theta(std::span<const double> vars) const;
  double phi(std::span<const double> vars) const;

  /// Copy with the cubic coefficient of the variables where flips[i] < 0
  /// negated (x_i -> -x_i). Quadratic coefficients are even and unchanged.
  DiagonalSystem with_sign_flips(std::span<const int> flips) const;

  bool operator==(const DiagonalSystem&) const = default;

 private:
  std::vector<std::int64_t> a_, b_, c_, d_;
  std::int64_t t_ = 0;
};

enum class SystemClass { A, B, C, Unclassified };

std::string_view to_string(SystemClass tag);

SystemClass classify(std::size_t m, std::size_t n);
inline SystemClass classify(const DiagonalSystem& sys) { return classify(sys.m(), sys.n()); }

/// Parses the flat key/value system document:
///
///     # comment
///     a = 1, -1, 2
///     b = [1, 1, -3]
///     c = 5
///     d =
///
/// Keys a and b are required; c and d default to empty. Values are integers
/// separated by commas and/or whitespace, optionally wrapped in brackets.
DiagonalSystem parse_system(std::string_view text);
DiagonalSystem load_system(const std::string& path);

/// Canonical document text; parse_system(format_system(s)) == s.
std::string format_system(const DiagonalSystem& sys);

/// The all-ones style balanced sample with s = 11, l = 11 (type A). Every
/// sign combination of (a_i, b_i) occurs, so positive real anchors exist,
/// and (a_{2k-1}, b_{2k-1}) = -(a_{2k}, b_{2k}) gives small explicit solutions.
DiagonalSystem balanced_sample_system();

}  // namespace cubquad
