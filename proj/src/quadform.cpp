// SPDX-License-Identifier: Apache-2.0
#include "conelab/quadform.hpp"

#include <string>

namespace conelab {

TernaryForm TernaryForm::from_coeffs(const std::array<i64, 6>& q) {
  TernaryForm F;
  F.coeffs_ = q;
  auto& A = F.gram2_;
  A[0][0] = 2 * q[0];
  A[1][1] = 2 * q[1];
  A[2][2] = 2 * q[2];
  A[0][1] = A[1][0] = q[3];
  A[0][2] = A[2][0] = q[4];
  A[1][2] = A[2][1] = q[5];

  auto minor2 = [&](int r0, int r1, int c0, int c1) {
    return A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0];
  };
  F.det_ = A[0][0] * minor2(1, 2, 1, 2) - A[0][1] * minor2(1, 2, 0, 2) +
           A[0][2] * minor2(1, 2, 0, 1);
  if (F.det_ == 0)
    fail(errc::degenerate_form, "degenerate form: det of doubled Gram matrix is 0");

  auto& adj = F.adj_;
  adj[0][0] = minor2(1, 2, 1, 2);
  adj[0][1] = -minor2(0, 2, 1, 2);
  adj[0][2] = minor2(0, 1, 1, 2);
  adj[1][0] = -minor2(1, 2, 0, 2);
  adj[1][1] = minor2(0, 2, 0, 2);
  adj[1][2] = -minor2(0, 1, 0, 2);
  adj[2][0] = minor2(1, 2, 0, 1);
  adj[2][1] = -minor2(0, 2, 0, 1);
  adj[2][2] = minor2(0, 1, 0, 1);
  return F;
}

std::pair<int, int> TernaryForm::signature() const {
  // Characteristic polynomial of A is x^3 - t*x^2 + m*x - det with integer
  // coefficients; A symmetric, so all roots are real and Descartes' rule is
  // exact for the counts of positive/negative eigenvalues.
  const auto& A = gram2_;
  i64 t = A[0][0] + A[1][1] + A[2][2];
  i64 m = (A[0][0] * A[1][1] - A[0][1] * A[1][0]) + (A[0][0] * A[2][2] - A[0][2] * A[2][0]) +
          (A[1][1] * A[2][2] - A[1][2] * A[2][1]);
  auto variations = [](std::array<i64, 4> c) {
    int v = 0, last = 0;
    for (i64 x : c) {
      if (x == 0) continue;
      int s = x > 0 ? 1 : -1;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  };
  int pos = variations({1, -t, m, -det_});
  int neg = variations({-1, -t, -m, -det_});
  return {pos, neg};
}

i64 TernaryForm::bad_modulus(i64 L) const {
  if (L < 1) fail(errc::invalid_argument, "bad_modulus: L must be >= 1");
  return 8 * L * delta();
}

} // namespace conelab
