#pragma once

// Nested-loop reference implementations. Each one enumerates the literal
// definition with no hashing, splitting or convolution, so the ledger code
// can be checked against it exactly.

#include <cstdint>
#include <functional>
#include <vector>

#include "cubquad/bigcount.hpp"
#include "cubquad/moments.hpp"
#include "cubquad/system.hpp"

namespace cubquad::oracle {

/// Calls visit(tuple) for every tuple in the product of the value lists.
void for_each_tuple(const std::vector<std::vector<std::int64_t>>& lists,
                    const std::function<void(const std::vector<std::int64_t>&)>& visit);

/// Product of the list sizes (the enumeration cost).
double enumeration_size(const std::vector<std::vector<std::int64_t>>& lists);

BigCount T(int s, std::int64_t X);
BigCount T_shifted(int s, std::int64_t X, std::int64_t h_range);
BigCount I(int s, std::int64_t Y, std::int64_t H);
BigCount J(int s, std::int64_t X);
BigCount J1(std::int64_t Y, std::int64_t H);
BigCount mixed(const std::vector<MomentFactor>& factors);

/// Solutions with x_i drawn from lists[i].
BigCount solutions(const DiagonalSystem& sys, const std::vector<std::vector<std::int64_t>>& lists);
BigCount N(const DiagonalSystem& sys, std::int64_t B);
/// Residue tuples mod q solving both congruences.
BigCount M(const DiagonalSystem& sys, std::int64_t q);

/// A(X, R) grown multiplicatively from the primes up to R (no sieve).
std::vector<std::int64_t> smooth_by_products(std::int64_t X, std::int64_t R);

/// Pairs of s-tuples in [1, X] that are permutations of one another.
BigCount permutation_pairs(int s, std::int64_t X);

}  // namespace cubquad::oracle
