#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "cubquad/local.hpp"
#include "cubquad/solver.hpp"
#include "cubquad/system.hpp"

namespace cubquad {

/// Hypotheses of the solubility theorem for a system: the arithmetic ones
/// decided from the coefficients, the real and p-adic ones carried as evidence.
struct ConditionReport {
  std::optional<RealAnchor> real_solution;  // nonsingular when found
  bool indefinite_phi = false;              // {b_i} and {d_k} contain both signs
  bool count_cubic_ok = false;              // l + m >= 7
  bool count_quad_ok = false;               // l + n >= 5
  bool total_ok = false;                    // s >= 11
  std::map<std::int64_t, PadicWitness> padic_witnesses;  // every prime up to the bound
};

struct ConditionOptions {
  std::int64_t prime_bound = 100;
  AnchorOptions anchor{};
  PadicOptions padic{};
};

ConditionReport check_conditions(const DiagonalSystem& sys, const ConditionOptions& opts = {});

}  // namespace cubquad
