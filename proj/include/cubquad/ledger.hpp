#pragma once

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cubquad/bigcount.hpp"
#include "cubquad/error.hpp"

namespace cubquad {

template <std::size_t D>
using Key = std::array<std::int64_t, D>;

template <std::size_t D>
Key<D> operator+(const Key<D>& a, const Key<D>& b) {
  Key<D> r;
  for (std::size_t i = 0; i < D; ++i)
    if (__builtin_add_overflow(a[i], b[i], &r[i])) throw std::overflow_error("ledger key overflow");
  return r;
}

template <std::size_t D>
Key<D> operator-(const Key<D>& a) {
  Key<D> r;
  for (std::size_t i = 0; i < D; ++i) r[i] = -a[i];
  return r;
}

/// Narrow a 128-bit form value into a ledger key component.
inline std::int64_t key_component(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max())
    throw std::overflow_error("form value exceeds 64-bit key range");
  return static_cast<std::int64_t>(v);
}

struct LedgerBudget {
  double max_entries = 5e7;  // per ledger
  double max_work = 4e10;    // hash probes in the match phase
};

/// Sparse map from form-value vectors to exact multiplicities.
template <std::size_t D>
class RepLedger {
 public:
  using key_type = Key<D>;
  using map_type = absl::flat_hash_map<Key<D>, std::uint64_t>;

  /// The ledger of the empty sum: {0 -> 1}.
  static RepLedger unit() {
    RepLedger l;
    l.map_.emplace(Key<D>{}, 1);
    return l;
  }

  /// Ledger of a single variable ranging over `values` (repeats accumulate).
  static RepLedger from_values(const std::vector<Key<D>>& values) {
    RepLedger l;
    l.arity_ = 1;
    l.map_.reserve(values.size());
    for (const auto& v : values) l.add(v, 1);
    return l;
  }

  void add(const Key<D>& k, std::uint64_t c) {
    auto& slot = map_[k];
    if (__builtin_add_overflow(slot, c, &slot)) throw std::overflow_error("ledger multiplicity overflow");
  }

  /// Fold in one more variable taking the values of `gen` (with multiplicity).
  RepLedger convolve(const RepLedger& gen, double max_entries = 5e7) const {
    RepLedger out;
    out.arity_ = arity_ + gen.arity_;
    const double est = std::min(static_cast<double>(map_.size()) * static_cast<double>(gen.map_.size()), max_entries);
    out.map_.reserve(static_cast<std::size_t>(std::min(est, 1e8)));
    for (const auto& [k1, c1] : map_) {
      for (const auto& [k2, c2] : gen.map_) {
        std::uint64_t c;
        if (__builtin_mul_overflow(c1, c2, &c)) throw std::overflow_error("ledger multiplicity overflow");
        out.add(k1 + k2, c);
      }
      if (static_cast<double>(out.map_.size()) > max_entries)
        throw BudgetExceeded("ledger support", static_cast<double>(out.map_.size()), max_entries);
    }
    return out;
  }

  /// gen folded in `times` times.
  RepLedger power(const RepLedger& gen, int times, double max_entries = 5e7) const {
    RepLedger cur = *this;
    for (int i = 0; i < times; ++i) cur = cur.convolve(gen, max_entries);
    return cur;
  }

  /// sum_k c(k)^2
  BigCount self_inner() const {
    BigCount acc = 0;
    for (const auto& [k, c] : map_) acc = checked_add(acc, checked_mul(c, c));
    return acc;
  }

  /// sum_k this(k) * other(-k - offset)
  BigCount match_negated(const RepLedger& other, const Key<D>& offset = Key<D>{}) const {
    const RepLedger& small = map_.size() <= other.map_.size() ? *this : other;
    const RepLedger& big = map_.size() <= other.map_.size() ? other : *this;
    BigCount acc = 0;
    for (const auto& [k, c] : small.map_) {
      auto it = big.map_.find(-(k + offset));
      if (it != big.map_.end()) acc = checked_add(acc, checked_mul(c, it->second));
    }
    return acc;
  }

  std::uint64_t at(const Key<D>& k) const {
    auto it = map_.find(k);
    return it == map_.end() ? 0 : it->second;
  }

  BigCount total_mass() const {
    BigCount acc = 0;
    for (const auto& [k, c] : map_) acc = checked_add(acc, c);
    return acc;
  }

  std::size_t support() const noexcept { return map_.size(); }
  int arity() const noexcept { return arity_; }
  const map_type& entries() const noexcept { return map_; }

 private:
  map_type map_;
  int arity_ = 0;
};

/// Size estimate for the ledger of a sum of variables: product of value
/// counts, with runs of identical value lists counted as multisets.
template <std::size_t D>
double estimate_support(const std::vector<const std::vector<Key<D>>*>& vars) {
  double est = 1;
  std::size_t i = 0;
  while (i < vars.size()) {
    std::size_t j = i + 1;
    while (j < vars.size() && *vars[j] == *vars[i]) ++j;
    const double n = static_cast<double>(vars[i]->size());
    const double k = static_cast<double>(j - i);
    // C(n + k - 1, k)
    est *= std::exp(std::lgamma(n + k) - std::lgamma(k + 1) - std::lgamma(n));
    i = j;
  }
  return est;
}

/// Number of tuples (v_1, ..., v_N), v_i drawn from vars[i] (with
/// multiplicity), whose sum is zero. The variables are split into a left
/// ledger, a right ledger and an outer block that is enumerated explicitly
/// with each combination matched against the two ledgers.
template <std::size_t D>
BigCount count_zero_sum(const std::vector<std::vector<Key<D>>>& vars, const LedgerBudget& budget = {}) {
  const std::size_t N = vars.size();
  if (N == 0) return 1;
  for (const auto& v : vars)
    if (v.empty()) return 0;

  double log_total = 0;
  for (const auto& v : vars) log_total += std::log(static_cast<double>(v.size()));
  const double target = std::min(budget.max_entries, std::exp(log_total / 2) * 1.0001);

  auto take = [&](std::size_t from) {
    std::vector<const std::vector<Key<D>>*> chosen;
    std::size_t i = from;
    while (i < N) {
      chosen.push_back(&vars[i]);
      if (chosen.size() > 1 && estimate_support(chosen) > target) {
        chosen.pop_back();
        break;
      }
      ++i;
    }
    return i;
  };
  const std::size_t left_end = take(0);
  const std::size_t right_end = take(left_end);

  auto build = [&](std::size_t b, std::size_t e) {
    RepLedger<D> l = RepLedger<D>::unit();
    for (std::size_t i = b; i < e; ++i) l = l.convolve(RepLedger<D>::from_values(vars[i]), budget.max_entries);
    return l;
  };
  const RepLedger<D> left = build(0, left_end);
  const RepLedger<D> right = build(left_end, right_end);

  double outer = 1;
  for (std::size_t i = right_end; i < N; ++i) outer *= static_cast<double>(vars[i].size());
  const double work = outer * static_cast<double>(std::min(left.support(), right.support()));
  if (work > budget.max_work) throw BudgetExceeded("zero-sum match work", work, budget.max_work);

  if (right_end == N) return left.match_negated(right);

  BigCount acc = 0;
  std::vector<std::size_t> idx(N - right_end, 0);
  std::vector<Key<D>> partial(N - right_end + 1, Key<D>{});
  // odometer over the outer block; partial[i+1] = partial[i] + value of var i
  std::size_t depth = 0;
  while (true) {
    if (depth == idx.size()) {
      acc = checked_add(acc, left.match_negated(right, partial[depth]));
      if (depth == 0) break;
      --depth;
      ++idx[depth];
      continue;
    }
    const auto& vals = vars[right_end + depth];
    if (idx[depth] == vals.size()) {
      idx[depth] = 0;
      if (depth == 0) break;
      --depth;
      ++idx[depth];
      continue;
    }
    partial[depth + 1] = partial[depth] + vals[idx[depth]];
    ++depth;
  }
  return acc;
}

}  // namespace cubquad
