// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "conelab/quadform.hpp"
#include "conelab/rational.hpp"
#include "conelab/util.hpp"

namespace conelab::localdens {

/// Congruence condition (L, gamma): gamma a point of the punctured cone mod L.
struct CongruenceCondition {
  i64 L = 1;
  Vec3i gamma{0, 0, 0};

  static CongruenceCondition make(const TernaryForm& F, i64 L, const Vec3i& gamma);
};

struct DensityValue {
  i64 p = 0;
  int k_used = 0;
  Rational value;
  bool stabilized = false;
};

/// Exact count of x in (Z/m)^3 with F(x) = 0 mod m, x = gamma mod p^{ord_p L}
/// for each p | m, and (primitive) p not dividing x for each p | m.
i64 count_mod(const TernaryForm& F, i64 m, const std::optional<CongruenceCondition>& cond,
              bool primitive, const Budget& budget = default_budget());

/// Stabilized local density sigma_p (or the primitive sigma_p^o); exact
/// rational limit of count(p^k)/p^{2k}.
DensityValue local_density(const TernaryForm& F, i64 p,
                           const std::optional<CongruenceCondition>& cond, bool primitive,
                           const Budget& budget = default_budget());

struct PrimeFactor {
  i64 p = 0;
  Rational sigma;
  Rational factor; // (1 - 1/p) * sigma_p
  bool stabilized = true;
};

struct SingularSeries {
  double value = 0;
  bool exact_zero = false;
  std::vector<PrimeFactor> factors;
  double tail_log = 0; // heuristic |log| of the omitted good-prime tail
};

/// Truncated singular series prod_{p<=P} (1-1/p) sigma_p(L,Gamma). Good primes
/// use the exact k=1 Hensel identity; validate_good_primes additionally
/// cross-checks each against a fiber count at k=2.
SingularSeries singular_series(const TernaryForm& F, const CongruenceCondition& cond,
                               i64 prime_cutoff, bool validate_good_primes = false,
                               const Budget& budget = default_budget());

struct RelationReport {
  i64 p = 0;
  Rational lhs; // (1 - 1/p) * sigma_p
  Rational rhs; // sigma_p^o
  bool holds = false;
};

/// Checks (1 - 1/p) sigma_p = sigma_p^o for p not dividing L, with the two
/// sides computed along independent routes (full-count extraction vs
/// primitive-count stabilization).
RelationReport primitive_relation_check(const TernaryForm& F, i64 p,
                                        const Budget& budget = default_budget());

struct TamagawaValue {
  double value = 0;
  std::vector<PrimeFactor> factors;
  double tail_log = 0;
};

/// omega_f^C(D(L,Lambda)) = prod_{p|L}(1-1/p) p^{-ord_p L} * prod_{p not| L}(1-1/p) sigma_p,
/// truncated at prime_cutoff.
TamagawaValue tamagawa_conic(const TernaryForm& F, i64 L, i64 prime_cutoff,
                             const Budget& budget = default_budget());

} // namespace conelab::localdens
