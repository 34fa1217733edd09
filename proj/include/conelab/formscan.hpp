// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "conelab/quadform.hpp"
#include "conelab/util.hpp"

namespace conelab::detail {

// Coefficients of G(s) = F(r + t*s) as a quadratic polynomial in s, reduced mod M.
struct ShiftedForm {
  i64 M;
  i64 quad[6]; // same layout as TernaryForm coefficients
  i64 lin[3];
  i64 cst;

  ShiftedForm(const TernaryForm& F, const Vec3i& r, i64 t, i64 M_) : M(M_) {
    const auto& q = F.coeffs();
    i64 t2 = mod_pos(mod_pos(t, M) * mod_pos(t, M), M);
    for (int i = 0; i < 6; ++i) quad[i] = mod_pos(mod_pos(q[i], M) * t2, M);
    Vec3i g = F.gradient(r);
    for (int i = 0; i < 3; ++i) lin[i] = mod_pos(mod_pos(g[i], M) * mod_pos(t, M), M);
    cst = mod_pos(F.evaluate(r), M);
  }
};

inline i64 mod_add(i64 a, i64 b, i64 M) {
  i64 s = a + b;
  return s >= M ? s - M : s;
}

// Scans s in [0,R)^3 evaluating G(s) mod M incrementally; fn(s1, s2, s3, value).
template <class Fn>
void scan_shifted(const ShiftedForm& G, i64 R, Fn&& fn) {
  const i64 M = G.M;
  const i64 a = G.quad[0], b = G.quad[1], c2 = G.quad[2];
  const i64 d = G.quad[3], e = G.quad[4], f = G.quad[5];
  const i64 two_c = mod_pos(2 * c2, M);
  for (i64 s1 = 0; s1 < R; ++s1) {
    i64 s1m = mod_pos(s1, M);
    i64 base1 = mod_pos(a * s1m % M * s1m + G.lin[0] * s1m % M + G.cst, M);
    i64 d_s1 = mod_pos(d * s1m, M);
    i64 e_s1 = mod_pos(e * s1m, M);
    for (i64 s2 = 0; s2 < R; ++s2) {
      i64 s2m = mod_pos(s2, M);
      i64 c0 = mod_pos(base1 + b * s2m % M * s2m + (d_s1 + G.lin[1]) * s2m % M, M);
      i64 c1 = mod_pos(e_s1 + f * s2m % M + G.lin[2], M);
      // value and first difference: G(s3+1) - G(s3) = c2*(2 s3 + 1) + c1
      i64 val = c0;
      i64 diff = mod_add(c2, c1, M);
      for (i64 s3 = 0; s3 < R; ++s3) {
        fn(s1, s2, s3, val);
        val = mod_add(val, diff, M);
        diff = mod_add(diff, two_c, M);
      }
    }
  }
}

} // namespace conelab::detail
