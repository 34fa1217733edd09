// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "conelab/errors.hpp"

namespace conelab {

using i64 = long long;
using u64 = unsigned long long;
using cplx = std::complex<double>;
using Vec3i = std::array<i64, 3>;
using Vec3d = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

inline i64 mod_pos(i64 x, i64 m) {
  x %= m;
  return x < 0 ? x + m : x;
}

inline i64 mod_mul(i64 a, i64 b, i64 m) { return (i64)((__int128)a * b % m); }

inline i64 mod_pow(i64 b, i64 e, i64 m) {
  i64 r = 1 % m;
  b = mod_pos(b, m);
  while (e > 0) {
    if (e & 1) r = mod_mul(r, b, m);
    b = mod_mul(b, b, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m, gcd(a, m) = 1 required.
inline i64 mod_inverse(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 g = m, x = 0, x1 = 1;
  a = mod_pos(a, m);
  i64 a1 = a;
  while (a1 != 0) {
    i64 q = g / a1;
    g -= q * a1;
    std::swap(g, a1);
    x -= q * x1;
    std::swap(x, x1);
  }
  if (g != 1) fail(errc::not_coprime, "mod_inverse: arguments not coprime");
  return mod_pos(x, m);
}

// exp(2*pi*i * n/q)
inline cplx unit_phase(i64 n, i64 q) {
  double t = 2.0 * kPi * (double(mod_pos(n, q)) / double(q));
  return {std::cos(t), std::sin(t)};
}

// floor(sqrt(n)) for n >= 0, exact.
inline i64 isqrt_floor(i64 n) {
  if (n < 0) fail(errc::invalid_argument, "isqrt of negative value");
  if (n == 0) return 0;
  i64 r = (i64)std::sqrt((double)n);
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_perfect_square(i64 n, i64* root = nullptr) {
  if (n < 0) return false;
  i64 r = isqrt_floor(n);
  if (root) *root = r;
  return r * r == n;
}

// Compensated (Kahan) accumulator for complex sums.
struct KahanSum {
  double sr = 0, cr = 0, si = 0, ci = 0;
  void add(cplx z) {
    double yr = z.real() - cr, t = sr + yr;
    cr = (t - sr) - yr;
    sr = t;
    double yi = z.imag() - ci, u = si + yi;
    ci = (u - si) - yi;
    si = u;
  }
  cplx value() const { return {sr, si}; }
};

// splitmix64; used both as a seeded stream and as a counter-based generator
// so sampled results do not depend on the thread count.
inline u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Rng {
  u64 state;
  explicit Rng(u64 seed) : state(seed) {}
  u64 next() { return splitmix64(state++); }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  // uniform in [lo, hi]
  i64 uniform_int(i64 lo, i64 hi) { return lo + i64(next() % u64(hi - lo + 1)); }
};

inline double hashed_uniform(u64 seed, u64 index) {
  return double(splitmix64(seed * 0x9e3779b97f4a7c15ULL + index) >> 11) * 0x1.0p-53;
}

// Work budget: heavy loops check an upfront estimate so runs fail fast.
struct Budget {
  i64 max_ops = 4'000'000'000LL;
  void require(i64 estimated_ops, const char* where) const {
    if (estimated_ops > max_ops)
      fail(errc::budget_exceeded, std::string(where) + ": estimated work " +
                                      std::to_string(estimated_ops) + " exceeds budget " +
                                      std::to_string(max_ops));
  }
};

inline const Budget& default_budget() {
  static Budget b;
  return b;
}

// Runs fn(chunk) for chunk in [0, n_chunks) on up to `threads` workers and
// returns the per-chunk results in chunk order. Reduction order is therefore
// independent of the thread count.
template <class T, class Fn>
std::vector<T> parallel_map_chunks(i64 n_chunks, int threads, Fn fn) {
  std::vector<T> out((size_t)n_chunks);
  if (threads <= 1 || n_chunks <= 1) {
    for (i64 i = 0; i < n_chunks; ++i) out[(size_t)i] = fn(i);
    return out;
  }
  std::atomic<i64> next{0};
  auto worker = [&] {
    for (;;) {
      i64 i = next.fetch_add(1);
      if (i >= n_chunks) break;
      out[(size_t)i] = fn(i);
    }
  };
  int nt = std::min<i64>(threads, n_chunks);
  std::vector<std::thread> pool;
  pool.reserve((size_t)nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

inline int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : (int)n;
}

} // namespace conelab
