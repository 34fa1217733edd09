// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "conelab/util.hpp"

namespace conelab {

/// Non-degenerate integral ternary quadratic form
///   F(x) = a*x1^2 + b*x2^2 + c*x3^2 + d*x1*x2 + e*x1*x3 + f*x2*x3,
/// kept together with its doubled Gram matrix A (so F(x) = x^T A x / 2)
/// and delta = |det A|. Immutable after construction.
class TernaryForm {
public:
  TernaryForm() = default; // empty; populate via from_coeffs
  static TernaryForm from_coeffs(const std::array<i64, 6>& coeffs);

  const std::array<i64, 6>& coeffs() const { return coeffs_; }
  const std::array<std::array<i64, 3>, 3>& gram2() const { return gram2_; }
  const std::array<std::array<i64, 3>, 3>& adjugate() const { return adj_; }
  i64 det() const { return det_; }
  i64 delta() const { return det_ < 0 ? -det_ : det_; }

  i64 evaluate(const Vec3i& x) const {
    const auto& q = coeffs_;
    return q[0] * x[0] * x[0] + q[1] * x[1] * x[1] + q[2] * x[2] * x[2] + q[3] * x[0] * x[1] +
           q[4] * x[0] * x[2] + q[5] * x[1] * x[2];
  }
  double evaluate_real(const Vec3d& x) const {
    const auto& q = coeffs_;
    return q[0] * x[0] * x[0] + q[1] * x[1] * x[1] + q[2] * x[2] * x[2] + q[3] * x[0] * x[1] +
           q[4] * x[0] * x[2] + q[5] * x[1] * x[2];
  }

  /// F*(c) = c^T adj(A) c, the dual form.
  i64 dual_eval(const Vec3i& c) const {
    i64 s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += c[i] * adj_[i][j] * c[j];
    return s;
  }

  /// Gradient of F, i.e. A*x.
  Vec3i gradient(const Vec3i& x) const {
    Vec3i g{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[i] += gram2_[i][j] * x[j];
    return g;
  }

  /// Real inertia signature (positives, negatives) of A.
  std::pair<int, int> signature() const;

  /// Omega = 8 * L * delta; every bad prime divides it.
  i64 bad_modulus(i64 L) const;

  bool indefinite() const {
    auto [p, n] = signature();
    return p >= 1 && n >= 1;
  }

private:
  std::array<i64, 6> coeffs_{};
  std::array<std::array<i64, 3>, 3> gram2_{};
  std::array<std::array<i64, 3>, 3> adj_{};
  i64 det_ = 0;
};

} // namespace conelab
