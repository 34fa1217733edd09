// SPDX-License-Identifier: Apache-2.0
#include "conelab/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "conelab/arith.hpp"

namespace conelab::enumerate {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

i64 isqrt_i128(i128 n) {
  if (n <= 0) return 0;
  u128 un = (u128)n;
  i64 r = (i64)std::sqrt((long double)un);
  while (r > 0 && (u128)r * (u128)r > un) --r;
  while ((u128)(r + 1) * (u128)(r + 1) <= un) ++r;
  return r;
}

// quadratic-residue tables: cheap rejection of non-squares before the sqrt
struct SquareFilter {
  bool mod64[64];
  bool mod63[63];
  std::vector<bool> mod4095; // 4095 = 63 * 65, ~8% of residues are squares
  SquareFilter() : mod4095(4095, false) {
    for (auto& v : mod64) v = false;
    for (auto& v : mod63) v = false;
    for (i64 i = 0; i < 64; ++i) mod64[i * i % 64] = true;
    for (i64 i = 0; i < 63; ++i) mod63[i * i % 63] = true;
    for (i64 i = 0; i < 4095; ++i) mod4095[(size_t)(i * i % 4095)] = true;
  }
};
const SquareFilter kSqFilter;

// Emits every x3 with F(x1, x2, x3) = 0, lo3 <= x3 <= hi3, in increasing order.
template <class Fn>
void solve_pivot(const TernaryForm& F, i64 x1, i64 x2, i64 lo3, i64 hi3, Fn&& emit) {
  const auto& q = F.coeffs();
  const i64 a = q[0], b = q[1], c = q[2], d = q[3], e = q[4], f = q[5];
  i64 B = e * x1 + f * x2;
  i64 C = a * x1 * x1 + b * x2 * x2 + d * x1 * x2;
  if (c != 0) {
    i64 r;
    const i64 cabs = c < 0 ? -c : c;
    if (std::abs(B) < (i64)1 << 30 && std::abs(C) < ((i64)1 << 61) / (4 * cabs)) {
      // narrow path: everything fits in int64
      i64 disc = B * B - 4 * c * C;
      if (disc < 0) return;
      if (!kSqFilter.mod64[disc & 63] || !kSqFilter.mod63[disc % 63]) return;
      r = (i64)std::sqrt(double(disc));
      while (r > 0 && r * r > disc) --r;
      while ((r + 1) * (r + 1) <= disc) ++r;
      if (r * r != disc) return;
    } else {
      i128 disc = (i128)B * B - (i128)4 * c * C;
      if (disc < 0) return;
      r = isqrt_i128(disc);
      if ((i128)r * r != disc) return;
    }
    i64 t1, t2;
    bool ok1 = ((-B + r) % (2 * c)) == 0, ok2 = ((-B - r) % (2 * c)) == 0;
    t1 = ok1 ? (-B + r) / (2 * c) : 0;
    t2 = ok2 ? (-B - r) / (2 * c) : 0;
    if (ok1 && ok2 && t1 == t2) ok2 = false;
    if (ok1 && ok2 && t1 > t2) std::swap(t1, t2);
    if (ok1 && t1 >= lo3 && t1 <= hi3) emit(t1);
    if (ok2 && t2 >= lo3 && t2 <= hi3) emit(t2);
    return;
  }
  if (B != 0) {
    if (C % B != 0) return;
    i64 t = -C / B;
    if (t >= lo3 && t <= hi3) emit(t);
    return;
  }
  if (C == 0)
    for (i64 t = lo3; t <= hi3; ++t) emit(t); // x3 unconstrained on this fiber
}

template <class Fn>
void scan_stripe(const TernaryForm& F, const Box& box, i64 x1, Fn&& fn) {
  const auto& q = F.coeffs();
  const i64 a = q[0], b = q[1], c = q[2], d = q[3], e = q[4], f = q[5];
  const i64 lo2 = box.lo[1], hi2 = box.hi[1];
  auto emit = [&](i64 x2) {
    solve_pivot(F, x1, x2, box.lo[2], box.hi[2], [&](i64 x3) { fn(Vec3i{x1, x2, x3}); });
  };
  bool fast = false;
  if (c != 0) {
    // disc(x2) = D2 x2^2 + D1 x2 + D0 stepped by second differences, with a
    // mod-4095 mirror feeding the square filter; the exact solve only runs on
    // the few candidates that survive
    const i64 D2 = f * f - 4 * c * b;
    const i64 D1 = (2 * e * f - 4 * c * d) * x1;
    const i64 D0 = (e * e - 4 * c * a) * x1 * x1;
    i64 m2 = std::max(std::abs(lo2), std::abs(hi2));
    i128 bound = (i128)std::abs(D2) * m2 * m2 + (i128)std::abs(D1) * m2 + std::abs(D0);
    fast = bound < ((i128)1 << 62);
    if (fast) {
      i64 val = D2 * lo2 * lo2 + D1 * lo2 + D0;
      i64 d1 = D2 * (2 * lo2 + 1) + D1;
      const i64 dd = 2 * D2;
      i64 val_m = mod_pos(val, 4095), d1_m = mod_pos(d1, 4095);
      const i64 dd_m = mod_pos(dd, 4095);
      for (i64 x2 = lo2; x2 <= hi2; ++x2) {
        if (val >= 0 && kSqFilter.mod64[val & 63] && kSqFilter.mod4095[(size_t)val_m]) emit(x2);
        val += d1;
        d1 += dd;
        val_m += d1_m;
        if (val_m >= 4095) val_m -= 4095;
        d1_m += dd_m;
        if (d1_m >= 4095) d1_m -= 4095;
      }
    }
  }
  if (!fast)
    for (i64 x2 = lo2; x2 <= hi2; ++x2) emit(x2);
}

} // namespace

void solutions_in_box(const TernaryForm& F, const Box& box,
                      const std::function<void(const Vec3i&)>& fn, int threads) {
  for (int i = 0; i < 3; ++i)
    if (box.lo[i] > box.hi[i]) return;
  i64 n_stripes = box.hi[0] - box.lo[0] + 1;
  if (threads <= 1) {
    for (i64 s = 0; s < n_stripes; ++s) scan_stripe(F, box, box.lo[0] + s, fn);
    return;
  }
  auto chunks = parallel_map_chunks<std::vector<Vec3i>>(n_stripes, threads, [&](i64 s) {
    std::vector<Vec3i> part;
    scan_stripe(F, box, box.lo[0] + s, [&](const Vec3i& x) { part.push_back(x); });
    return part;
  });
  for (auto& part : chunks)
    for (auto& x : part) fn(x);
}

std::vector<Vec3i> solutions_in_box_vec(const TernaryForm& F, const Box& box, int threads) {
  std::vector<Vec3i> out;
  solutions_in_box(F, box, [&](const Vec3i& x) { out.push_back(x); }, threads);
  return out;
}

namespace {

Box scaled_support_box(const archimedean::WeightFunction& w, double B) {
  Vec3d lo, hi;
  w.support_box(lo, hi);
  Box box;
  for (int i = 0; i < 3; ++i) {
    box.lo[i] = (i64)std::ceil(lo[i] * B - 1e-9);
    box.hi[i] = (i64)std::floor(hi[i] * B + 1e-9);
  }
  return box;
}

bool congruent(const Vec3i& x, const localdens::CongruenceCondition& cond) {
  for (int i = 0; i < 3; ++i)
    if (mod_pos(x[i], cond.L) != cond.gamma[i]) return false;
  return true;
}

bool is_primitive(const Vec3i& x) {
  i64 g = std::gcd(std::gcd(x[0] < 0 ? -x[0] : x[0], x[1] < 0 ? -x[1] : x[1]),
                   x[2] < 0 ? -x[2] : x[2]);
  return g == 1;
}

} // namespace

std::vector<double> weighted_count_grid(const CountRequest& req, const std::vector<double>& Bs) {
  double B_max = *std::max_element(Bs.begin(), Bs.end());
  Box box = scaled_support_box(req.weight, B_max);
  for (int i = 0; i < 3; ++i)
    if (box.lo[i] > box.hi[i]) return std::vector<double>(Bs.size(), 0.0);

  i64 n_stripes = box.hi[0] - box.lo[0] + 1;
  auto partials = parallel_map_chunks<std::vector<double>>(n_stripes, req.threads, [&](i64 s) {
    std::vector<double> acc(Bs.size(), 0.0);
    scan_stripe(req.form, box, box.lo[0] + s, [&](const Vec3i& x) {
      if (req.condition && !congruent(x, *req.condition)) return;
      if (req.primitive && !is_primitive(x)) return;
      for (size_t bi = 0; bi < Bs.size(); ++bi) {
        double inv = 1.0 / Bs[bi];
        double v = req.weight({x[0] * inv, x[1] * inv, x[2] * inv});
        if (v != 0.0) acc[bi] += v;
      }
    });
    return acc;
  });
  std::vector<double> out(Bs.size(), 0.0);
  for (auto& part : partials)
    for (size_t bi = 0; bi < Bs.size(); ++bi) out[bi] += part[bi];
  return out;
}

double weighted_count(const CountRequest& req) {
  return weighted_count_grid(req, {req.B})[0];
}

double mobius_inverted_count(const CountRequest& req, std::optional<i64> D_in) {
  const i64 L = req.condition ? req.condition->L : 1;
  Vec3d lo, hi;
  req.weight.support_box(lo, hi);
  double reach = 0;
  for (int i = 0; i < 3; ++i) reach = std::max({reach, std::abs(lo[i]), std::abs(hi[i])});
  i64 D = D_in.value_or((i64)std::floor(req.B * reach) + 1);

  double total = 0;
  for (i64 d = 1; d <= D; ++d) {
    if (std::gcd(d, L) != 1) continue;
    i64 mu = arith::mobius(d);
    if (mu == 0) continue;
    CountRequest inner = req;
    inner.primitive = false;
    inner.B = req.B / double(d);
    if (req.condition) {
      i64 dbar = mod_inverse(d, L);
      Vec3i g{mod_pos(dbar * req.condition->gamma[0], L),
              mod_pos(dbar * req.condition->gamma[1], L),
              mod_pos(dbar * req.condition->gamma[2], L)};
      inner.condition = localdens::CongruenceCondition::make(req.form, L, g);
    }
    total += double(mu) * weighted_count(inner);
  }
  return total;
}

} // namespace conelab::enumerate
