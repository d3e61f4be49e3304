#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubquad {

/// Exact nonnegative solution count. Every count produced at desk scale fits
/// comfortably in 128 bits; arithmetic that would wrap throws instead.
using BigCount = unsigned __int128;

inline BigCount checked_add(BigCount a, BigCount b) {
  BigCount r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("count overflow (add)");
  return r;
}

inline BigCount checked_mul(BigCount a, BigCount b) {
  BigCount r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("count overflow (mul)");
  return r;
}

inline std::string to_decimal(BigCount v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline BigCount parse_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty decimal count");
  BigCount v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal count: " + text);
    v = checked_add(checked_mul(v, 10), static_cast<BigCount>(ch - '0'));
  }
  return v;
}

inline double to_double(BigCount v) { return static_cast<double>(static_cast<long double>(v)); }

}  // namespace cubquad
