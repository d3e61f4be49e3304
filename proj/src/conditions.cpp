#include "cubquad/conditions.hpp"

namespace cubquad {

ConditionReport check_conditions(const DiagonalSystem& sys, const ConditionOptions& opts) {
  ConditionReport rep;
  bool pos = false, neg = false;
  for (auto v : sys.b()) (v > 0 ? pos : neg) = true;
  for (auto v : sys.d()) (v > 0 ? pos : neg) = true;
  rep.indefinite_phi = pos && neg;
  rep.count_cubic_ok = sys.l() + sys.m() >= 7;
  rep.count_quad_ok = sys.l() + sys.n() >= 5;
  rep.total_ok = sys.s() >= 11;
  rep.real_solution = find_real_anchor(sys, opts.anchor);
  for (auto p : primes_up_to(opts.prime_bound)) rep.padic_witnesses.emplace(p, padic_witness(sys, p, opts.padic));
  return rep;
}

}  // namespace cubquad
