#include "oracles/oracles.hpp"

#include <algorithm>
#include <map>

namespace cubquad::oracle {

void for_each_tuple(const std::vector<std::vector<std::int64_t>>& lists,
                    const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  for (const auto& l : lists)
    if (l.empty()) return;
  std::vector<std::size_t> idx(lists.size(), 0);
  std::vector<std::int64_t> tuple(lists.size());
  while (true) {
    for (std::size_t i = 0; i < lists.size(); ++i) tuple[i] = lists[i][idx[i]];
    visit(tuple);
    std::size_t p = 0;
    while (p < lists.size() && ++idx[p] == lists[p].size()) idx[p++] = 0;
    if (p == lists.size()) return;
  }
}

double enumeration_size(const std::vector<std::vector<std::int64_t>>& lists) {
  double n = 1;
  for (const auto& l : lists) n *= static_cast<double>(l.size());
  return n;
}

namespace {

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (std::int64_t x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

std::vector<std::int64_t> nonzero(std::int64_t H) {
  std::vector<std::int64_t> v;
  for (std::int64_t h = -H; h <= H; ++h)
    if (h != 0) v.push_back(h);
  return v;
}

__int128 pw(std::int64_t x, int k) {
  __int128 r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// sum_{i<s} x_i^k - sum_{i>=s} x_i^k over a 2s-tuple
__int128 power_difference(const std::vector<std::int64_t>& t, int s, int k) {
  __int128 d = 0;
  for (int i = 0; i < s; ++i) d += pw(t[i], k) - pw(t[s + i], k);
  return d;
}

}  // namespace

BigCount T(int s, std::int64_t X) {
  BigCount n = 0;
  for_each_tuple(std::vector(2 * s, range(1, X)), [&](const auto& t) {
    if (power_difference(t, s, 3) == 0 && power_difference(t, s, 2) == 0) ++n;
  });
  return n;
}

BigCount T_shifted(int s, std::int64_t X, std::int64_t h_range) {
  BigCount n = 0;
  for_each_tuple(std::vector(2 * s, range(1, X)), [&](const auto& t) {
    const __int128 lin = power_difference(t, s, 1);
    if (power_difference(t, s, 3) == 0 && power_difference(t, s, 2) == 0 && lin <= h_range && -lin <= h_range) ++n;
  });
  return n;
}

BigCount I(int s, std::int64_t Y, std::int64_t H) {
  std::vector<std::vector<std::int64_t>> lists;
  for (int i = 0; i < 2 * s; ++i) {
    lists.push_back(nonzero(H));
    lists.push_back(range(1, Y));
  }
  BigCount n = 0;
  for_each_tuple(lists, [&](const auto& t) {
    __int128 e0 = 0, e1 = 0, e2 = 0;
    for (int i = 0; i < 2 * s; ++i) {
      const __int128 h = t[2 * i], y = t[2 * i + 1];
      e0 += h;
      e1 += h * y;
      e2 += h * y * y;
    }
    if (e0 == 0 && e1 == 0 && e2 == 0) ++n;
  });
  return n;
}

BigCount J(int s, std::int64_t X) {
  BigCount n = 0;
  for_each_tuple(std::vector(2 * s, range(1, X)), [&](const auto& t) {
    if (power_difference(t, s, 1) == 0 && power_difference(t, s, 2) == 0 && power_difference(t, s, 3) == 0) ++n;
  });
  return n;
}

BigCount J1(std::int64_t Y, std::int64_t H) {
  std::vector<std::vector<std::int64_t>> lists;
  for (int i = 0; i < 4; ++i) {
    lists.push_back(nonzero(H));
    lists.push_back(range(1, Y));
  }
  BigCount n = 0;
  for_each_tuple(lists, [&](const auto& t) {
    const std::int64_t lhs0 = t[0] + t[2], rhs0 = t[4] + t[6];
    const std::int64_t lhs1 = t[0] * t[1] + t[2] * t[3], rhs1 = t[4] * t[5] + t[6] * t[7];
    if (lhs0 == rhs0 && lhs1 == rhs1) ++n;
  });
  return n;
}

BigCount mixed(const std::vector<MomentFactor>& factors) {
  // each factor |sum|^{2k} contributes k variables on each side
  std::vector<std::vector<std::int64_t>> lists;
  std::vector<std::int64_t> cub, quad;
  std::vector<int> sign;
  for (const auto& f : factors) {
    const auto sup = f.support();
    for (int side : {1, -1})
      for (int i = 0; i < f.exponent / 2; ++i) {
        lists.push_back(sup);
        cub.push_back(f.cubic);
        quad.push_back(f.quad);
        sign.push_back(side);
      }
  }
  BigCount n = 0;
  for_each_tuple(lists, [&](const auto& t) {
    __int128 c = 0, q = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      c += sign[i] * cub[i] * pw(t[i], 3);
      q += sign[i] * quad[i] * pw(t[i], 2);
    }
    if (c == 0 && q == 0) ++n;
  });
  return n;
}

BigCount solutions(const DiagonalSystem& sys, const std::vector<std::vector<std::int64_t>>& lists) {
  BigCount n = 0;
  for_each_tuple(lists, [&](const auto& t) {
    __int128 c = 0, q = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      c += sys.cubic_coef(i) * pw(t[i], 3);
      q += sys.quad_coef(i) * pw(t[i], 2);
    }
    if (c == 0 && q == 0) ++n;
  });
  return n;
}

BigCount N(const DiagonalSystem& sys, std::int64_t B) {
  return solutions(sys, std::vector(sys.s(), range(-B, B)));
}

BigCount M(const DiagonalSystem& sys, std::int64_t q) {
  BigCount n = 0;
  for_each_tuple(std::vector(sys.s(), range(0, q - 1)), [&](const auto& t) {
    __int128 c = 0, p = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      c += sys.cubic_coef(i) * pw(t[i], 3);
      p += sys.quad_coef(i) * pw(t[i], 2);
    }
    if (c % q == 0 && p % q == 0) ++n;
  });
  return n;
}

std::vector<std::int64_t> smooth_by_products(std::int64_t X, std::int64_t R) {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p <= R; ++p) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) primes.push_back(p);
  }
  std::vector<std::int64_t> out{1};
  // multiply in each prime power in turn
  for (auto p : primes) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::int64_t v = out[i] * p; v <= X; v *= p) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigCount permutation_pairs(int s, std::int64_t X) {
  // sum over multisets of (number of orderings)^2
  std::map<std::vector<std::int64_t>, BigCount> orderings;
  for_each_tuple(std::vector(s, range(1, X)), [&](const auto& t) {
    auto key = t;
    std::sort(key.begin(), key.end());
    ++orderings[key];
  });
  BigCount total = 0;
  for (const auto& [k, c] : orderings) total += c * c;
  return total;
}

}  // namespace cubquad::oracle
