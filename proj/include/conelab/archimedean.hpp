// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "conelab/quadform.hpp"
#include "conelab/util.hpp"

namespace conelab::archimedean {

enum class WeightKind { radial, box, octant };

/// Smooth compactly supported bump on R^3, built from the standard
/// exp(1 - 1/(1 - r^2)) profile. Values lie in [0, 1]; identically zero
/// outside the stated support.
struct WeightFunction {
  WeightKind kind = WeightKind::radial;
  Vec3d center{0, 0, 0};
  double radius = 1.0;     // radial
  Vec3d extents{1, 1, 1};  // box: half-widths around center
  Vec3d lo{0, 0, 0};       // octant: per-axis support interval [lo, hi]
  Vec3d hi{1, 1, 1};
  bool symmetric = false;  // evaluate (w0(x) + w0(-x))/2

  double operator()(const Vec3d& x) const;

  /// Tight axis-aligned support box [box_lo, box_hi].
  void support_box(Vec3d& box_lo, Vec3d& box_hi) const;
};

WeightFunction make_radial_weight(const Vec3d& center, double radius, bool symmetric);
WeightFunction make_box_weight(const Vec3d& center, const Vec3d& extents, bool symmetric);
WeightFunction make_octant_weight(const Vec3d& lo, const Vec3d& hi, bool symmetric);

enum class QuadratureMethod { monte_carlo, grid, leray };

struct QuadratureSpec {
  std::vector<double> epsilons;      // decreasing thickening widths
  i64 samples = 4'000'000;           // Monte Carlo sample count (>= 1e4) or grid cells
  u64 seed = 0x5EED;
  QuadratureMethod method = QuadratureMethod::monte_carlo;
  int threads = 1;

  static QuadratureSpec defaults();
};

struct IntegralValue {
  double value = 0;
  double error = 0;            // statistical + extrapolation estimate
  bool support_misses_cone = false;
  std::vector<double> per_epsilon; // thickened values along the schedule
};

/// Singular integral I(w): the theta-integral localized onto F = 0, evaluated
/// as lim_{eps->0} (1/2eps) vol_w(|F| < eps) with first-order Richardson
/// extrapolation (monte_carlo / grid methods), or directly as the Leray
/// surface integral over the cone graph (leray method).
IntegralValue singular_integral(const TernaryForm& F, const WeightFunction& w,
                                const QuadratureSpec& spec);

} // namespace conelab::archimedean
