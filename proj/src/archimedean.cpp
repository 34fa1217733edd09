// SPDX-License-Identifier: Apache-2.0
#include "conelab/archimedean.hpp"

#include <algorithm>
#include <cmath>

namespace conelab::archimedean {

namespace {

// the standard bump profile on (-1, 1)
double bump1(double u) {
  double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u2));
}

double eval_base(const WeightFunction& w, const Vec3d& x) {
  switch (w.kind) {
    case WeightKind::radial: {
      double r2 = 0;
      for (int i = 0; i < 3; ++i) {
        double d = (x[i] - w.center[i]) / w.radius;
        r2 += d * d;
      }
      if (r2 >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    case WeightKind::box: {
      double v = 1.0;
      for (int i = 0; i < 3; ++i) {
        v *= bump1((x[i] - w.center[i]) / w.extents[i]);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
    case WeightKind::octant: {
      double v = 1.0;
      for (int i = 0; i < 3; ++i) {
        double mid = 0.5 * (w.lo[i] + w.hi[i]), half = 0.5 * (w.hi[i] - w.lo[i]);
        v *= bump1((x[i] - mid) / half);
        if (v == 0.0) return 0.0;
      }
      return v;
    }
  }
  return 0.0;
}

} // namespace

double WeightFunction::operator()(const Vec3d& x) const {
  if (!symmetric) return eval_base(*this, x);
  Vec3d xn{-x[0], -x[1], -x[2]};
  return 0.5 * (eval_base(*this, x) + eval_base(*this, xn));
}

void WeightFunction::support_box(Vec3d& box_lo, Vec3d& box_hi) const {
  for (int i = 0; i < 3; ++i) {
    switch (kind) {
      case WeightKind::radial:
        box_lo[i] = center[i] - radius;
        box_hi[i] = center[i] + radius;
        break;
      case WeightKind::box:
        box_lo[i] = center[i] - extents[i];
        box_hi[i] = center[i] + extents[i];
        break;
      case WeightKind::octant:
        box_lo[i] = lo[i];
        box_hi[i] = hi[i];
        break;
    }
  }
  if (symmetric) {
    for (int i = 0; i < 3; ++i) {
      double a = std::min(box_lo[i], -box_hi[i]);
      double b = std::max(box_hi[i], -box_lo[i]);
      box_lo[i] = a;
      box_hi[i] = b;
    }
  }
}

WeightFunction make_radial_weight(const Vec3d& center, double radius, bool symmetric) {
  if (!(radius > 0)) fail(errc::bad_extents, "weight: radius must be positive");
  WeightFunction w;
  w.kind = WeightKind::radial;
  w.center = center;
  w.radius = radius;
  w.symmetric = symmetric;
  return w;
}

WeightFunction make_box_weight(const Vec3d& center, const Vec3d& extents, bool symmetric) {
  for (double e : extents)
    if (!(e > 0)) fail(errc::bad_extents, "weight: extents must be positive");
  WeightFunction w;
  w.kind = WeightKind::box;
  w.center = center;
  w.extents = extents;
  w.symmetric = symmetric;
  return w;
}

WeightFunction make_octant_weight(const Vec3d& lo, const Vec3d& hi, bool symmetric) {
  for (int i = 0; i < 3; ++i)
    if (!(lo[i] >= 0) || !(hi[i] > lo[i]))
      fail(errc::bad_extents, "octant weight requires 0 <= lo < hi per axis");
  WeightFunction w;
  w.kind = WeightKind::octant;
  w.lo = lo;
  w.hi = hi;
  w.symmetric = symmetric;
  return w;
}

QuadratureSpec QuadratureSpec::defaults() {
  QuadratureSpec s;
  for (int j = 4; j <= 12; ++j) s.epsilons.push_back(std::ldexp(1.0, -j));
  return s;
}

namespace {

bool support_meets_cone(const TernaryForm& F, const Vec3d& lo, const Vec3d& hi) {
  const int n = 33;
  double fmin = 1e300, fmax = -1e300;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        Vec3d x{lo[0] + (hi[0] - lo[0]) * i / n, lo[1] + (hi[1] - lo[1]) * j / n,
                lo[2] + (hi[2] - lo[2]) * k / n};
        double v = F.evaluate_real(x);
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
      }
  return fmin <= 0 && fmax >= 0;
}

struct EpsStats {
  double sum = 0, sum2 = 0; // accumulated w and w^2 over shell hits
  i64 hits = 0;
};

// Weighted fit of V(eps) against the model sum_k beta_k eps^{pow_k}; the
// value of interest is the eps^0 coefficient. Returns its standard error
// with a lack-of-fit inflation.
void extrapolate_fit(const std::vector<double>& eps, const std::vector<double>& val,
                     const std::vector<double>& sigma, const std::vector<double>& powers,
                     double& I, double& I_err) {
  size_t n = eps.size(), m = powers.size();
  if (n < m) {
    I = val.back();
    I_err = sigma.back() + (n >= 2 ? std::abs(val[n - 1] - val[n - 2]) : 0.0);
    return;
  }
  std::vector<std::vector<double>> X(m, std::vector<double>(n));
  for (size_t k = 0; k < m; ++k)
    for (size_t j = 0; j < n; ++j) X[k][j] = std::pow(eps[j], powers[k]);
  // normal equations with weights 1/sigma^2, solved by Gaussian elimination
  std::vector<std::vector<double>> A(m, std::vector<double>(m + 1, 0.0));
  for (size_t j = 0; j < n; ++j) {
    double w = 1.0 / std::max(sigma[j] * sigma[j], 1e-300);
    for (size_t a = 0; a < m; ++a) {
      A[a][m] += w * X[a][j] * val[j];
      for (size_t b = 0; b < m; ++b) A[a][b] += w * X[a][j] * X[b][j];
    }
  }
  std::vector<std::vector<double>> Ainv(m, std::vector<double>(m, 0.0));
  {
    std::vector<std::vector<double>> G(m, std::vector<double>(2 * m, 0.0));
    for (size_t a = 0; a < m; ++a) {
      for (size_t b = 0; b < m; ++b) G[a][b] = A[a][b];
      G[a][m + a] = 1.0;
    }
    for (size_t col = 0; col < m; ++col) {
      size_t piv = col;
      for (size_t r = col + 1; r < m; ++r)
        if (std::abs(G[r][col]) > std::abs(G[piv][col])) piv = r;
      std::swap(G[col], G[piv]);
      if (std::abs(G[col][col]) < 1e-300) {
        I = val.back();
        I_err = sigma.back();
        return;
      }
      double inv = 1.0 / G[col][col];
      for (size_t c = 0; c < 2 * m; ++c) G[col][c] *= inv;
      for (size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        double f = G[r][col];
        for (size_t c = 0; c < 2 * m; ++c) G[r][c] -= f * G[col][c];
      }
    }
    for (size_t a = 0; a < m; ++a)
      for (size_t b = 0; b < m; ++b) Ainv[a][b] = G[a][m + b];
  }
  std::vector<double> beta(m, 0.0);
  for (size_t a = 0; a < m; ++a)
    for (size_t b = 0; b < m; ++b) beta[a] += Ainv[a][b] * A[b][m];
  I = beta[0];
  double chi2 = 0;
  for (size_t j = 0; j < n; ++j) {
    double pred = 0;
    for (size_t a = 0; a < m; ++a) pred += beta[a] * X[a][j];
    double r = (val[j] - pred) / std::max(sigma[j], 1e-300);
    chi2 += r * r;
  }
  double dof = std::max<double>(1.0, double(n) - double(m));
  I_err = std::sqrt(std::max(0.0, Ainv[0][0]) * std::max(1.0, chi2 / dof));
}

IntegralValue thickened_value(const TernaryForm& F, const WeightFunction& w,
                              const QuadratureSpec& spec, bool use_grid) {
  Vec3d lo, hi;
  w.support_box(lo, hi);
  IntegralValue out;
  if (!support_meets_cone(F, lo, hi)) {
    out.support_misses_cone = true;
    return out;
  }
  double volume = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  std::vector<double> eps = spec.epsilons;
  if (eps.empty()) eps = QuadratureSpec::defaults().epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  size_t ne = eps.size();

  i64 N = std::max<i64>(spec.samples, 10'000);
  std::vector<EpsStats> stats(ne);
  i64 n_grid = use_grid ? std::max<i64>(8, (i64)std::cbrt((double)N)) : 0;
  if (use_grid) N = n_grid * n_grid * n_grid;

  const i64 chunk = 1 << 16;
  i64 n_chunks = (N + chunk - 1) / chunk;
  auto partials = parallel_map_chunks<std::vector<EpsStats>>(
      n_chunks, spec.threads, [&](i64 ci) {
        std::vector<EpsStats> part(ne);
        i64 i0 = ci * chunk, i1 = std::min(N, i0 + chunk);
        for (i64 i = i0; i < i1; ++i) {
          Vec3d x;
          if (use_grid) {
            i64 a = i % n_grid, b = (i / n_grid) % n_grid, c = i / (n_grid * n_grid);
            x = {lo[0] + (hi[0] - lo[0]) * (a + 0.5) / n_grid,
                 lo[1] + (hi[1] - lo[1]) * (b + 0.5) / n_grid,
                 lo[2] + (hi[2] - lo[2]) * (c + 0.5) / n_grid};
          } else {
            x = {lo[0] + (hi[0] - lo[0]) * hashed_uniform(spec.seed, 3 * (u64)i),
                 lo[1] + (hi[1] - lo[1]) * hashed_uniform(spec.seed, 3 * (u64)i + 1),
                 lo[2] + (hi[2] - lo[2]) * hashed_uniform(spec.seed, 3 * (u64)i + 2)};
          }
          double wx = w(x);
          if (wx == 0.0) continue;
          double Fx = std::abs(F.evaluate_real(x));
          for (size_t j = 0; j < ne; ++j) {
            if (Fx >= eps[j]) break; // eps decreasing
            part[j].sum += wx;
            part[j].sum2 += wx * wx;
            part[j].hits += 1;
          }
        }
        return part;
      });
  for (auto& part : partials)
    for (size_t j = 0; j < ne; ++j) {
      stats[j].sum += part[j].sum;
      stats[j].sum2 += part[j].sum2;
      stats[j].hits += part[j].hits;
    }

  // keep only levels the sampling can resolve: enough shell hits, and for
  // grids a shell at least a couple of cells thick
  double grad_scale = 1.0;
  if (use_grid) {
    for (int corner = 0; corner < 8; ++corner) {
      Vec3d x{corner & 1 ? hi[0] : lo[0], corner & 2 ? hi[1] : lo[1],
              corner & 4 ? hi[2] : lo[2]};
      Vec3i xi{(i64)std::llround(x[0] * 64), (i64)std::llround(x[1] * 64),
               (i64)std::llround(x[2] * 64)};
      Vec3i g = F.gradient(xi);
      double norm = std::sqrt(double(g[0]) * g[0] + double(g[1]) * g[1] + double(g[2]) * g[2]) / 64.0;
      grad_scale = std::max(grad_scale, norm);
    }
  }
  double h_grid = use_grid ? (hi[0] - lo[0]) / double(n_grid) : 0.0;
  std::vector<double> keep_eps, val, sig;
  for (size_t j = 0; j < ne; ++j) {
    if (stats[j].hits < 50) continue;
    if (use_grid && eps[j] < 0.5 * h_grid * grad_scale) continue;
    double mean = stats[j].sum / double(N);
    double var = std::max(0.0, stats[j].sum2 / double(N) - mean * mean);
    keep_eps.push_back(eps[j]);
    val.push_back(volume * mean / (2 * eps[j]));
    sig.push_back(use_grid ? std::abs(val.back()) * (0.5 * h_grid * grad_scale / eps[j]) + 1e-12
                           : volume / (2 * eps[j]) * std::sqrt(var / double(N)) + 1e-12);
  }
  out.per_epsilon = val;
  if (val.empty()) {
    out.value = 0;
    out.error = 0;
    return out;
  }
  // the thickened volume is C^1 in eps for supports transversal to the cone;
  // a support containing the vertex picks up an extra sqrt(eps) term from the
  // scale-invariant neighbourhood of 0
  bool vertex_inside = w({0, 0, 0}) > 0.0;
  std::vector<double> powers = vertex_inside ? std::vector<double>{0.0, 0.5, 1.0}
                                             : std::vector<double>{0.0, 1.0};
  extrapolate_fit(keep_eps, val, sig, powers, out.value, out.error);
  return out;
}

// off-diagonal coefficient of x_i x_j in the form
double pair_coeff(const TernaryForm& F, int i, int j) {
  const auto& q = F.coeffs();
  int a = std::min(i, j), b = std::max(i, j);
  if (a == 0 && b == 1) return double(q[3]);
  if (a == 0 && b == 2) return double(q[4]);
  return double(q[5]);
}

// Exact integral of 1/sqrt(D2 v^2 + D1 v + D0) over [a, b], assuming the
// quadratic is positive on the open interval. Endpoint roots are fine: the
// antiderivatives stay finite there.
double inv_sqrt_quad_integral(double D2, double D1, double D0, double a, double b) {
  if (b <= a) return 0.0;
  auto disc_at = [&](double v) { return std::max(0.0, (D2 * v + D1) * v + D0); };
  if (std::abs(D2) < 1e-14 * (std::abs(D1) + std::abs(D0) + 1)) {
    if (std::abs(D1) < 1e-14 * (std::abs(D0) + 1))
      return (b - a) / std::sqrt(std::max(D0, 1e-300));
    return 2.0 * (std::sqrt(disc_at(b)) - std::sqrt(disc_at(a))) / D1;
  }
  if (D2 > 0) {
    // d/dv log|2 sqrt(D2 disc) + 2 D2 v + D1| = sqrt(D2)/sqrt(disc) on both
    // branches; the argument is negative left of the roots
    auto anti = [&](double v) {
      return std::log(
          std::max(std::abs(2.0 * std::sqrt(D2 * disc_at(v)) + 2.0 * D2 * v + D1), 1e-300));
    };
    return (anti(b) - anti(a)) / std::sqrt(D2);
  }
  double delta = D1 * D1 - 4 * D2 * D0; // > 0 when the quadratic is positive somewhere
  if (delta <= 0) return 0.0;
  auto anti = [&](double v) {
    double arg = (2.0 * D2 * v + D1) / std::sqrt(delta);
    return std::asin(std::clamp(arg, -1.0, 1.0));
  };
  return -(anti(b) - anti(a)) / std::sqrt(-D2);
}

// Leray surface integral: solve for a pivot coordinate with nonzero
// quadratic coefficient. Per outer strip the discriminant is a quadratic in
// the inner variable, and the 1/sqrt(disc) kernel is integrated exactly over
// each cell, so fold lines of the projection cost accuracy but not
// stability.
IntegralValue leray_value(const TernaryForm& F, const WeightFunction& w,
                          const QuadratureSpec& spec) {
  const auto& q = F.coeffs();
  int piv = -1;
  double best = 0;
  const double qc[3] = {double(q[0]), double(q[1]), double(q[2])};
  for (int i = 0; i < 3; ++i)
    if (std::abs(qc[i]) > best) {
      best = std::abs(qc[i]);
      piv = i;
    }
  if (piv < 0)
    fail(errc::invalid_argument,
         "leray method needs a variable with nonzero quadratic coefficient");
  int ua = (piv + 1) % 3, va = (piv + 2) % 3;

  Vec3d lo, hi;
  w.support_box(lo, hi);
  IntegralValue out;
  if (!support_meets_cone(F, lo, hi)) {
    out.support_misses_cone = true;
    return out;
  }

  const double A = qc[piv];
  const double bu = pair_coeff(F, piv, ua), bv = pair_coeff(F, piv, va);
  const double cu = qc[ua], cv = qc[va], cuv = pair_coeff(F, ua, va);

  auto integrate = [&](i64 n) {
    double du = (hi[ua] - lo[ua]) / double(n), dv = (hi[va] - lo[va]) / double(n);
    double acc = 0;
    for (i64 i = 0; i < n; ++i) {
      double xu = lo[ua] + (i + 0.5) * du;
      // disc(v) = (bu*xu + bv*v)^2 - 4A(cu*xu^2 + cuv*xu*v + cv*v^2)
      double D2 = bv * bv - 4 * A * cv;
      double D1 = 2 * bu * bv * xu - 4 * A * cuv * xu;
      double D0 = (bu * bu - 4 * A * cu) * xu * xu;
      auto disc_at = [&](double vv) { return (D2 * vv + D1) * vv + D0; };
      for (i64 j = 0; j < n; ++j) {
        double v0 = lo[va] + j * dv, v1 = v0 + dv;
        // clip the cell to {disc > 0}
        double a = v0, b = v1;
        double da = disc_at(v0), db = disc_at(v1);
        if (std::abs(D2) > 1e-14) {
          double delta = D1 * D1 - 4 * D2 * D0;
          if (delta > 0) {
            double r1 = (-D1 - std::sqrt(delta)) / (2 * D2);
            double r2 = (-D1 + std::sqrt(delta)) / (2 * D2);
            if (r1 > r2) std::swap(r1, r2);
            if (D2 > 0) {
              // positive outside (r1, r2): keep the larger clipped side
              double left_len = std::max(0.0, std::min(b, r1) - a);
              double right_len = std::max(0.0, b - std::max(a, r2));
              if (left_len >= right_len)
                b = std::min(b, r1);
              else
                a = std::max(a, r2);
            } else {
              a = std::max(a, r1);
              b = std::min(b, r2);
            }
          } else if (D2 < 0) {
            continue; // negative everywhere
          }
        } else if (std::abs(D1) > 1e-14) {
          if (D1 > 0)
            a = std::max(a, -D0 / D1);
          else
            b = std::min(b, -D0 / D1);
        } else if (D0 <= 0) {
          continue;
        }
        (void)da;
        (void)db;
        if (b <= a) continue;
        double K = inv_sqrt_quad_integral(D2, D1, D0, a, b);
        if (!(K > 0)) continue;
        double vm = 0.5 * (a + b);
        double dm = disc_at(vm);
        if (dm <= 0) continue;
        double sq = std::sqrt(dm);
        double B = bu * xu + bv * vm;
        double wsum = 0;
        for (double t : {(-B + sq) / (2 * A), (-B - sq) / (2 * A)}) {
          Vec3d x{};
          x[ua] = xu;
          x[va] = vm;
          x[piv] = t;
          wsum += w(x);
        }
        acc += wsum * K;
      }
      (void)dv;
    }
    return acc * du;
  };

  i64 n = std::max<i64>(256, (i64)std::sqrt((double)std::max<i64>(spec.samples, 10'000)));
  double coarse = integrate(n / 2);
  double fine = integrate(n);
  out.value = fine;
  out.error = std::abs(fine - coarse) + 1e-9 * std::abs(fine);
  return out;
}

} // namespace

IntegralValue singular_integral(const TernaryForm& F, const WeightFunction& w,
                                const QuadratureSpec& spec) {
  switch (spec.method) {
    case QuadratureMethod::monte_carlo:
      return thickened_value(F, w, spec, false);
    case QuadratureMethod::grid:
      return thickened_value(F, w, spec, true);
    case QuadratureMethod::leray:
      return leray_value(F, w, spec);
  }
  fail(errc::internal, "unknown quadrature method");
}

} // namespace conelab::archimedean
