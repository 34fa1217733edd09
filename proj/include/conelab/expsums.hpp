// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "conelab/arith.hpp"
#include "conelab/quadform.hpp"
#include "conelab/util.hpp"

namespace conelab::expsums {

/// Everything the complete sums S_{q,L,lambda}(c) depend on: the form, the
/// congruence modulus L, a lifted representative lambda of the residue class
/// (entries in [0, L)), and omega = 8*L*delta.
struct SumContext {
  TernaryForm form;
  i64 L = 1;
  Vec3i lambda{0, 0, 0};
  i64 omega = 8;
  Budget budget;

  static SumContext make(const TernaryForm& F, i64 L, const Vec3i& lambda_in,
                         Budget budget = default_budget());
};

struct TruncationPolicy {
  i64 u_max = 4096;   // bound for sums over u | omega^inf
  i64 x_max = 10000;  // bound for square-full sums
  bool tail_report = true;
};

struct SeriesValue {
  cplx value{0.0, 0.0};
  double tail_bound = 0.0;
  i64 terms = 0;
};

/// S_{q,L,lambda}(c) by direct summation over sigma in (Z/qL)^3 with the
/// a-sum collapsed to a Ramanujan sum. Work is (qL)^3.
cplx sum_Sq(const SumContext& ctx, i64 q, const Vec3i& c);

/// S_{q,L,lambda}(0) as an exact integer (same direct algorithm).
i64 sum_S0_exact(const SumContext& ctx, i64 q);

/// Closed form S^(1)_{q,L,lambda}(c) = e_{q1}(-(q2 L^2)^-1 c.lambda) iota_{q1}^3 T(q1;c)
/// for q1 coprime to omega.
cplx sum_S1_closed(const SumContext& ctx, i64 q1, i64 q2, const Vec3i& c);

/// Script-S sum S_{q2,L,lambda}(x;c): direct for L > 1, stationary-phase
/// recursion per prime power for L = 1.
cplx sum_S2(const SumContext& ctx, i64 q2, i64 x, const Vec3i& c);

/// Same sum by the direct definitional enumeration for any L; the slow route
/// the fast one is checked against.
cplx sum_S2_reference(const SumContext& ctx, i64 q2, i64 x, const Vec3i& c);

/// S^(2)_{q,L,lambda}(c) = e_{q2 L^2}(-q1^-1 c.lambda) * S_{q2,L,lambda}(q1;c).
cplx sum_S2_twisted(const SumContext& ctx, i64 q1, i64 q2, const Vec3i& c);

/// Salie-type sum T(x;c) = sum_{(a,x)=1} (a/x) e_x(-a*Fstar_c) for odd x.
cplx salie_T(i64 x, i64 Fstar_c);

/// A_{q2,L,lambda}(chi;c) = (1/phi(L)) sum over units x mod L of chi(x) S(x;c).
cplx char_average_A(const SumContext& ctx, i64 q2, const arith::RealCharacter& chi,
                    const Vec3i& c);

/// Admissibility test: a signed divisor xi of L with -Fstar_c/xi a positive
/// perfect square and chi = (xi/.) on residues coprime to L.
std::optional<i64> creal_test(const arith::RealCharacter& chi, i64 Fstar_c, i64 L);

/// theta_chi(c): a square-full series attached to an admissible (chi, c) with
/// F*(c) != 0. Truncated at policy.x_max with a reported tail estimate.
SeriesValue theta_chi(const SumContext& ctx, const arith::RealCharacter& chi, const Vec3i& c,
                      const TruncationPolicy& policy);

/// eta_lambda(chi;c), truncated over omega-smooth u <= policy.u_max.
SeriesValue eta_coefficient(const SumContext& ctx, const arith::RealCharacter& chi,
                            const Vec3i& c, const TruncationPolicy& policy);

/// eta_lambda(c) = sum over admissible real characters mod L.
SeriesValue eta_lambda(const SumContext& ctx, const Vec3i& c, const TruncationPolicy& policy);

/// Partial sum F_lambda(c;X) = sum_{q<=X} e_{qL^2}(c.lambda) S_q(c) / q^2,
/// evaluated through the verified multiplicative split (S^(1) closed form
/// times cached S^(2) factors). `threads` parallelizes over q with a
/// deterministic ordered reduction.
cplx partial_F(const SumContext& ctx, const Vec3i& c, i64 X, int threads = 1);

/// Same as partial_F but every S_q evaluated by the direct definition;
/// intended for cross-checks at small X.
cplx partial_F_direct(const SumContext& ctx, const Vec3i& c, i64 X);

struct S0Partials {
  i64 sum_plain = 0;       // sum_{q<=X} S_q(0), exact
  double sum_over_q3 = 0;  // sum_{q<=X} S_q(0)/q^3
};

/// Both c = 0 partial sums, exact integers via the multiplicative split.
S0Partials partial_sum_S0(const SumContext& ctx, i64 X, int threads = 1);

/// Omega-smooth integers <= bound in increasing order.
std::vector<i64> omega_smooth_upto(i64 omega, i64 bound);

/// Square-full integers <= bound coprime to omega, increasing.
std::vector<i64> squarefull_coprime_upto(i64 omega, i64 bound);

} // namespace conelab::expsums
