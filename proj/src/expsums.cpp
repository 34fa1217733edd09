// SPDX-License-Identifier: Apache-2.0
#include "conelab/expsums.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "conelab/formscan.hpp"

namespace conelab::expsums {

using arith::RealCharacter;

SumContext SumContext::make(const TernaryForm& F, i64 L, const Vec3i& lambda_in, Budget budget) {
  if (L < 1) fail(errc::invalid_argument, "SumContext: L must be >= 1");
  SumContext ctx;
  ctx.form = F;
  ctx.L = L;
  for (int i = 0; i < 3; ++i) ctx.lambda[i] = mod_pos(lambda_in[i], L);
  ctx.omega = F.bad_modulus(L);
  ctx.budget = budget;
  if (mod_pos(F.evaluate(ctx.lambda), L) != 0)
    fail(errc::invalid_argument, "SumContext: F(lambda) != 0 mod L, not a point of the cone");
  for (auto& [p, e] : arith::factorize(L)) {
    if (ctx.lambda[0] % p == 0 && ctx.lambda[1] % p == 0 && ctx.lambda[2] % p == 0)
      fail(errc::invalid_argument,
           "SumContext: lambda = 0 mod " + std::to_string(p) + ", not on the punctured cone");
  }
  return ctx;
}

namespace {

// Ramanujan sums c_q(v) for v in [0, q): mu(q/g) * phi(q) / phi(q/g), g = gcd(v, q).
std::vector<i64> ramanujan_table(i64 q) {
  std::vector<i64> table((size_t)q, 0);
  i64 phi_q = arith::euler_phi(q);
  std::map<i64, i64> by_divisor;
  for (i64 g = 1; g * g <= q; ++g) {
    if (q % g) continue;
    for (i64 d : {g, q / g}) {
      i64 m = arith::mobius(q / d);
      by_divisor[d] = m == 0 ? 0 : m * (phi_q / arith::euler_phi(q / d));
    }
  }
  for (i64 v = 0; v < q; ++v) table[(size_t)v] = by_divisor[std::gcd(v, q)];
  return table;
}

using detail::scan_shifted;
using detail::ShiftedForm;

std::vector<cplx> phase_table(i64 coeff, i64 stride, i64 offset, i64 R, i64 M) {
  // e_M(coeff * (offset + stride * s)) for s in [0, R)
  std::vector<cplx> t((size_t)R);
  for (i64 s = 0; s < R; ++s) t[(size_t)s] = unit_phase(coeff * (offset + stride * s), M);
  return t;
}

} // namespace

cplx sum_Sq(const SumContext& ctx, i64 q, const Vec3i& c) {
  if (q < 1) fail(errc::invalid_argument, "sum_Sq: q must be >= 1");
  const i64 L = ctx.L, R = q * L, M = q * L * L;
  ctx.budget.require(R * R * R, "sum_Sq");
  auto rq = ramanujan_table(q);
  ShiftedForm G(ctx.form, ctx.lambda, L, M);
  std::array<std::vector<cplx>, 3> ph;
  for (int i = 0; i < 3; ++i) ph[i] = phase_table(c[i], 1, 0, R, q * L);
  const i64 L2 = L * L;
  KahanSum acc;
  scan_shifted(G, R, [&](i64 s1, i64 s2, i64 s3, i64 val) {
    if (val % L2 != 0) return;
    cplx z = ph[0][(size_t)s1] * ph[1][(size_t)s2] * ph[2][(size_t)s3];
    acc.add(double(rq[(size_t)(val / L2)]) * z);
  });
  return acc.value();
}

i64 sum_S0_exact(const SumContext& ctx, i64 q) {
  if (q < 1) fail(errc::invalid_argument, "sum_S0_exact: q must be >= 1");
  const i64 L = ctx.L, R = q * L, M = q * L * L;
  ctx.budget.require(R * R * R, "sum_S0_exact");
  auto rq = ramanujan_table(q);
  ShiftedForm G(ctx.form, ctx.lambda, L, M);
  const i64 L2 = L * L;
  i64 acc = 0;
  scan_shifted(G, R, [&](i64, i64, i64, i64 val) {
    if (val % L2 == 0) acc += rq[(size_t)(val / L2)];
  });
  return acc;
}

cplx salie_T(i64 x, i64 Fstar_c) {
  if (x < 1 || x % 2 == 0) fail(errc::even_modulus, "salie_T: modulus must be odd and positive");
  if (x == 1) return 1.0;
  i64 m = mod_pos(Fstar_c, x);
  if (m == 0) {
    i64 r;
    return is_perfect_square(x, &r) ? cplx(double(arith::euler_phi(x)), 0.0) : cplx(0.0, 0.0);
  }
  if (std::gcd(m, x) == 1 && arith::mobius(x) != 0)
    return double(arith::jacobi(mod_pos(-Fstar_c, x), x)) * arith::gauss_iota(x);
  KahanSum acc;
  for (i64 a = 1; a < x; ++a) {
    if (std::gcd(a, x) != 1) continue;
    acc.add(double(arith::jacobi(a, x)) * unit_phase(-a * m, x));
  }
  return acc.value();
}

cplx sum_S1_closed(const SumContext& ctx, i64 q1, i64 q2, const Vec3i& c) {
  if (std::gcd(q1, ctx.omega) != 1)
    fail(errc::not_coprime, "sum_S1_closed: q1 must be coprime to omega");
  if (q1 == 1) return 1.0;
  i64 cl = c[0] * ctx.lambda[0] + c[1] * ctx.lambda[1] + c[2] * ctx.lambda[2];
  i64 inv = mod_inverse(mod_pos(q2 % q1 * (ctx.L % q1) % q1 * (ctx.L % q1), q1), q1);
  cplx phase = unit_phase(-inv * mod_pos(cl, q1), q1);
  cplx i1 = arith::gauss_iota(q1);
  return phase * i1 * i1 * i1 * salie_T(q1, ctx.form.dual_eval(c));
}

namespace {

// Complete quadratic sum T(a, c; p^k) = sum_{alpha mod p^k} e_{p^k}(a F(alpha) + c.alpha)
// by stationary-phase descent: for k >= 2 only alpha with a*A*alpha + c = 0 mod p
// contribute, and each contributes a scaled copy of the same sum at level k-2.
struct TKey {
  i64 p, a, c0, c1, c2;
  int k;
  bool operator<(const TKey& o) const {
    return std::tie(p, k, a, c0, c1, c2) < std::tie(o.p, o.k, o.a, o.c0, o.c1, o.c2);
  }
};

cplx t_prime_power(const TernaryForm& F, i64 a, Vec3i c, i64 p, int k,
                   std::map<TKey, cplx>& memo) {
  if (k == 0) return 1.0;
  i64 q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  a = mod_pos(a, q);
  for (int i = 0; i < 3; ++i) c[i] = mod_pos(c[i], q);
  TKey key{p, a, c[0], c[1], c[2], k};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  cplx result;
  if (k == 1) {
    KahanSum acc;
    Vec3i x;
    for (x[0] = 0; x[0] < p; ++x[0])
      for (x[1] = 0; x[1] < p; ++x[1])
        for (x[2] = 0; x[2] < p; ++x[2])
          acc.add(unit_phase(a * F.evaluate(x) + c[0] * x[0] + c[1] * x[1] + c[2] * x[2], p));
    result = acc.value();
  } else {
    KahanSum acc;
    Vec3i b;
    for (b[0] = 0; b[0] < p; ++b[0])
      for (b[1] = 0; b[1] < p; ++b[1])
        for (b[2] = 0; b[2] < p; ++b[2]) {
          Vec3i g = F.gradient(b);
          for (int i = 0; i < 3; ++i) g[i] = a * g[i] + c[i];
          if (g[0] % p || g[1] % p || g[2] % p) continue;
          i64 G = a * F.evaluate(b) + c[0] * b[0] + c[1] * b[1] + c[2] * b[2];
          Vec3i w{g[0] / p, g[1] / p, g[2] / p};
          acc.add(unit_phase(G, q) * t_prime_power(F, a, w, p, k - 2, memo));
        }
    result = double(p) * double(p) * double(p) * acc.value();
  }
  memo[key] = result;
  return result;
}

// Script-S for L = 1 via the descent above: S_{q2}(x;c) = sum over units a of
// the CRT product of prime-power sums with inverse-twisted arguments.
cplx sum_S2_fast_L1(const SumContext& ctx, i64 q2, const Vec3i& c) {
  if (q2 == 1) return 1.0;
  auto fac = arith::factorize(q2);
  std::map<TKey, cplx> memo;
  KahanSum acc;
  for (i64 a = 1; a <= q2; ++a) {
    if (std::gcd(a, q2) != 1) continue;
    cplx prod = 1.0;
    for (auto& [p, e] : fac) {
      i64 pk = 1;
      for (int i = 0; i < e; ++i) pk *= p;
      i64 m_inv = mod_inverse((q2 / pk) % pk, pk);
      Vec3i ct{mod_pos(m_inv * c[0], pk), mod_pos(m_inv * c[1], pk), mod_pos(m_inv * c[2], pk)};
      prod *= t_prime_power(ctx.form, mod_pos(m_inv * a, pk), ct, p, e, memo);
    }
    acc.add(prod);
  }
  return acc.value();
}

} // namespace

cplx sum_S2_reference(const SumContext& ctx, i64 q2, i64 x, const Vec3i& c) {
  const i64 L = ctx.L, M = q2 * L * L, R = q2 * L;
  ctx.budget.require(R * R * R, "sum_S2");
  i64 xbar = mod_inverse(x, L);
  Vec3i r{mod_pos(xbar * ctx.lambda[0], L), mod_pos(xbar * ctx.lambda[1], L),
          mod_pos(xbar * ctx.lambda[2], L)};
  auto rq = ramanujan_table(q2);
  ShiftedForm G(ctx.form, r, L, M);
  std::array<std::vector<cplx>, 3> ph;
  for (int i = 0; i < 3; ++i) ph[i] = phase_table(c[i], L, r[i], R, M);
  const i64 L2 = L * L;
  KahanSum acc;
  scan_shifted(G, R, [&](i64 s1, i64 s2, i64 s3, i64 val) {
    if (val % L2 != 0) return;
    acc.add(double(rq[(size_t)(val / L2)]) * ph[0][(size_t)s1] * ph[1][(size_t)s2] *
            ph[2][(size_t)s3]);
  });
  return acc.value();
}

namespace {

// Exact integer value of script-S at c = 0.
i64 sum_S2_int0(const SumContext& ctx, i64 q2, i64 x) {
  if (q2 == 1 && ctx.L == 1) return 1;
  const i64 L = ctx.L, M = q2 * L * L, R = q2 * L;
  ctx.budget.require(R * R * R, "sum_S2_int0");
  i64 xbar = mod_inverse(x, L);
  Vec3i r{mod_pos(xbar * ctx.lambda[0], L), mod_pos(xbar * ctx.lambda[1], L),
          mod_pos(xbar * ctx.lambda[2], L)};
  auto rq = ramanujan_table(q2);
  ShiftedForm G(ctx.form, r, L, M);
  const i64 L2 = L * L;
  i64 acc = 0;
  scan_shifted(G, R, [&](i64, i64, i64, i64 val) {
    if (val % L2 == 0) acc += rq[(size_t)(val / L2)];
  });
  return acc;
}

bool divides_omega_inf(i64 q2, i64 omega) {
  for (auto& [p, e] : arith::factorize(q2))
    if (omega % p != 0) return false;
  return true;
}

} // namespace

cplx sum_S2(const SumContext& ctx, i64 q2, i64 x, const Vec3i& c) {
  if (q2 < 1) fail(errc::invalid_argument, "sum_S2: q2 must be >= 1");
  if (!divides_omega_inf(q2, ctx.omega))
    fail(errc::not_coprime, "sum_S2: q2 must divide omega^inf");
  if (ctx.L > 1 && std::gcd(x, ctx.L) != 1)
    fail(errc::not_coprime, "sum_S2: x must be coprime to L");
  if (q2 == 1 && ctx.L == 1) return 1.0;
  if (ctx.L == 1) return sum_S2_fast_L1(ctx, q2, c);
  return sum_S2_reference(ctx, q2, x, c);
}

cplx sum_S2_twisted(const SumContext& ctx, i64 q1, i64 q2, const Vec3i& c) {
  const i64 M = q2 * ctx.L * ctx.L;
  i64 cl = c[0] * ctx.lambda[0] + c[1] * ctx.lambda[1] + c[2] * ctx.lambda[2];
  cplx phase = unit_phase(-mod_inverse(q1, M) * mod_pos(cl, M), M);
  return phase * sum_S2(ctx, q2, mod_pos(q1, ctx.L), c);
}

cplx char_average_A(const SumContext& ctx, i64 q2, const RealCharacter& chi, const Vec3i& c) {
  if (chi.modulus != ctx.L)
    fail(errc::invalid_argument, "char_average_A: character modulus must equal L");
  auto units = arith::units_mod(ctx.L);
  KahanSum acc;
  for (i64 x : units) acc.add(double(chi(x)) * sum_S2(ctx, q2, ctx.L == 1 ? 1 : x, c));
  return acc.value() / double(units.size());
}

std::optional<i64> creal_test(const RealCharacter& chi, i64 Fstar_c, i64 L) {
  if (Fstar_c == 0) fail(errc::zero_dual, "creal_test: F*(c) must be nonzero");
  std::vector<i64> divisors;
  for (i64 d = 1; d * d <= L; ++d) {
    if (L % d) continue;
    divisors.push_back(d);
    if (d != L / d) divisors.push_back(L / d);
  }
  std::sort(divisors.begin(), divisors.end());
  for (i64 d : divisors) {
    for (int sign : {1, -1}) {
      i64 xi = sign * d;
      if ((-Fstar_c) % xi != 0) continue;
      i64 t = (-Fstar_c) / xi;
      if (t <= 0 || !is_perfect_square(t)) continue;
      // match chi against the Kronecker symbol (xi/.) over a full joint period
      i64 axi = xi < 0 ? -xi : xi;
      i64 W = std::lcm(L, 4 * axi);
      bool match = true;
      for (i64 n = 1; n <= W && match; ++n) {
        if (std::gcd(n, L) != 1) continue;
        if (chi(n) != arith::kronecker(xi, n)) match = false;
      }
      if (match) return xi;
    }
  }
  return std::nullopt;
}

SeriesValue theta_chi(const SumContext& ctx, const RealCharacter& chi, const Vec3i& c,
                      const TruncationPolicy& policy) {
  i64 Fs = ctx.form.dual_eval(c);
  if (Fs == 0) fail(errc::zero_dual, "theta_chi: F*(c) = 0");
  const double six_over_pi2 = 6.0 / (kPi * kPi);
  auto local_factor = [&](i64 x) {
    // product over p | x*omega*F*(c) of p/(p+1), the density of square-free
    // integers coprime to that modulus relative to 6/pi^2
    std::set<i64> primes;
    for (auto& [p, e] : arith::factorize(x)) primes.insert(p);
    for (auto& [p, e] : arith::factorize(ctx.omega)) primes.insert(p);
    for (auto& [p, e] : arith::factorize(Fs < 0 ? -Fs : Fs)) primes.insert(p);
    double f = 1.0;
    for (i64 p : primes) f *= double(p) / double(p + 1);
    return f;
  };
  auto xs = squarefull_coprime_upto(ctx.omega, policy.x_max);
  KahanSum acc;
  double t_ratio = 1.0;
  double cnorm = 0;
  for (int i = 0; i < 3; ++i) cnorm = std::max(cnorm, double(c[i] < 0 ? -c[i] : c[i]));
  cnorm = std::max(cnorm, 1.0);
  for (i64 x : xs) {
    int chi_x = chi(x);
    cplx t = salie_T(x, Fs);
    t_ratio = std::max(t_ratio, std::abs(t) / (std::sqrt(double(x)) * cnorm));
    if (chi_x == 0) continue;
    acc.add(double(chi_x) * t / (double(x) * arith::gauss_iota(x)) * local_factor(x));
  }
  SeriesValue out;
  out.value = six_over_pi2 * acc.value();
  out.terms = (i64)xs.size();
  if (policy.tail_report) {
    // |T(x;c)| <~ |c| sqrt(x), so tail terms are <~ |c|/x on the square-full set
    auto ext = squarefull_coprime_upto(ctx.omega, policy.x_max * 100);
    double tail = 0;
    for (i64 x : ext)
      if (x > policy.x_max) tail += 1.0 / double(x);
    tail += 4.4 / std::sqrt(double(policy.x_max) * 100.0);
    out.tail_bound = six_over_pi2 * t_ratio * cnorm * tail;
  }
  return out;
}

SeriesValue eta_coefficient(const SumContext& ctx, const RealCharacter& chi, const Vec3i& c,
                            const TruncationPolicy& policy) {
  i64 Fs = ctx.form.dual_eval(c);
  SeriesValue out;
  cplx theta_factor;
  double theta_tail = 0;
  if (Fs == 0) {
    // density of phi over integers coprime to omega: (3/pi^2) prod p/(p+1)
    double pref = 3.0 / (kPi * kPi);
    for (auto& [p, e] : arith::factorize(ctx.omega)) pref *= double(p) / double(p + 1);
    theta_factor = pref;
  } else {
    if (!creal_test(chi, Fs, ctx.L).has_value()) return out; // inadmissible: empty sum
    auto th = theta_chi(ctx, chi, c, policy);
    theta_factor = th.value;
    theta_tail = th.tail_bound;
  }
  auto us = omega_smooth_upto(ctx.omega, policy.u_max);
  KahanSum acc;
  double a_ratio = 1.0;
  for (i64 u : us) {
    cplx a = char_average_A(ctx, u, chi, c);
    a_ratio = std::max(a_ratio, std::abs(a) / std::pow(double(u), 2.5));
    acc.add(a / (double(u) * double(u) * double(u)));
  }
  cplx usum = acc.value();
  out.value = theta_factor * usum;
  out.terms = (i64)us.size();
  if (policy.tail_report) {
    // |A_u| <~ u^{5/2} so the u-tail is sum u^{-1/2} over the smooth set
    auto ext = omega_smooth_upto(ctx.omega, policy.u_max * 100000);
    double tail_u = 0;
    for (i64 u : ext)
      if (u > policy.u_max) tail_u += a_ratio / std::sqrt(double(u));
    out.tail_bound = std::abs(theta_factor) * tail_u + std::abs(usum) * theta_tail +
                     theta_tail * tail_u;
  }
  return out;
}

SeriesValue eta_lambda(const SumContext& ctx, const Vec3i& c, const TruncationPolicy& policy) {
  SeriesValue out;
  KahanSum acc;
  for (const auto& chi : arith::real_characters(ctx.L)) {
    auto e = eta_coefficient(ctx, chi, c, policy);
    acc.add(e.value);
    out.tail_bound += e.tail_bound;
    out.terms += 1;
  }
  out.value = acc.value();
  return out;
}

namespace {

// Combine Salie values over a coprime factorization:
// T(q'q'';c) = (q''/q')(q'/q'') T(q';c) T(q'';c).
struct SalieCombiner {
  i64 modulus = 1;
  cplx value{1.0, 0.0};
  void push(i64 x, cplx t) {
    if (modulus > 1 && x > 1)
      value *= double(arith::jacobi(modulus, x) * arith::jacobi(x, modulus));
    value *= t;
    modulus *= x;
  }
};

} // namespace

cplx partial_F(const SumContext& ctx, const Vec3i& c, i64 X, int threads) {
  if (X < 1) fail(errc::invalid_argument, "partial_F: X must be >= 1");
  const i64 L = ctx.L;
  i64 Fs = ctx.form.dual_eval(c);
  auto spf = arith::spf_sieve(X);

  // Salie values at prime powers coprime to omega
  std::unordered_map<i64, cplx> salie_cache;
  for (i64 p = 2; p <= X; ++p) {
    if (spf[(size_t)p] != p || ctx.omega % p == 0) continue;
    for (i64 pe = p; pe <= X; pe *= p) {
      salie_cache[pe] = salie_T(pe, Fs);
      if (pe > X / p) break;
    }
  }
  // script-S per (q2, unit class of q1 mod L)
  std::map<std::pair<i64, i64>, cplx> s2_cache;
  auto q2s = omega_smooth_upto(ctx.omega, X);
  auto units = arith::units_mod(L);
  if (L == 1) units = {1};
  for (i64 q2 : q2s)
    for (i64 x : units) s2_cache[{q2, x}] = sum_S2(ctx, q2, x, c);

  i64 cl = c[0] * ctx.lambda[0] + c[1] * ctx.lambda[1] + c[2] * ctx.lambda[2];

  auto eval_term = [&](i64 q) -> cplx {
    // split q into q1 (coprime to omega) and q2 via its factorization
    i64 q1 = 1, q2 = 1;
    SalieCombiner comb;
    i64 rest = q;
    while (rest > 1) {
      i64 p = spf[(size_t)rest], pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
      }
      if (ctx.omega % p == 0) {
        q2 *= pe;
      } else {
        q1 *= pe;
        comb.push(pe, salie_cache.at(pe));
      }
    }
    cplx s1;
    if (q1 == 1) {
      s1 = 1.0;
    } else {
      i64 inv = mod_inverse(mod_pos(q2 % q1 * (L % q1) % q1 * (L % q1), q1), q1);
      cplx i1 = arith::gauss_iota(q1);
      s1 = unit_phase(-inv * mod_pos(cl, q1), q1) * i1 * i1 * i1 * comb.value;
    }
    const i64 M = q2 * L * L;
    cplx s2 = unit_phase(-mod_inverse(q1, M) * mod_pos(cl, M), M) *
              s2_cache.at({q2, L == 1 ? 1 : mod_pos(q1, L)});
    cplx pre = unit_phase(mod_pos(cl, q * L * L), q * L * L);
    return pre * s1 * s2 / (double(q) * double(q));
  };

  const i64 chunk = 64;
  i64 n_chunks = (X + chunk - 1) / chunk;
  auto partials = parallel_map_chunks<cplx>(n_chunks, threads, [&](i64 ci) {
    KahanSum acc;
    for (i64 q = ci * chunk + 1; q <= std::min(X, (ci + 1) * chunk); ++q) acc.add(eval_term(q));
    return acc.value();
  });
  KahanSum total;
  for (cplx z : partials) total.add(z);
  return total.value();
}

cplx partial_F_direct(const SumContext& ctx, const Vec3i& c, i64 X) {
  KahanSum acc;
  const i64 L2 = ctx.L * ctx.L;
  i64 cl = c[0] * ctx.lambda[0] + c[1] * ctx.lambda[1] + c[2] * ctx.lambda[2];
  for (i64 q = 1; q <= X; ++q)
    acc.add(unit_phase(mod_pos(cl, q * L2), q * L2) * sum_Sq(ctx, q, c) /
            (double(q) * double(q)));
  return acc.value();
}

S0Partials partial_sum_S0(const SumContext& ctx, i64 X, int threads) {
  if (X < 1) fail(errc::invalid_argument, "partial_sum_S0: X must be >= 1");
  auto spf = arith::spf_sieve(X);
  std::map<std::pair<i64, i64>, i64> s2_cache;
  auto q2s = omega_smooth_upto(ctx.omega, X);
  auto units = arith::units_mod(ctx.L);
  if (ctx.L == 1) units = {1};
  for (i64 q2 : q2s)
    for (i64 x : units) s2_cache[{q2, x}] = sum_S2_int0(ctx, q2, x);

  auto eval_q = [&](i64 q) -> i64 {
    i64 q1 = 1, q2 = 1, rest = q;
    while (rest > 1) {
      i64 p = spf[(size_t)rest], pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
      }
      (ctx.omega % p == 0 ? q2 : q1) *= pe;
    }
    i64 s1;
    i64 root;
    if (q1 == 1) {
      s1 = 1;
    } else if (is_perfect_square(q1, &root)) {
      s1 = root * root * root * arith::euler_phi(q1); // iota^3 * phi, both exact
    } else {
      return 0; // T(q1; 0) vanishes unless q1 is a perfect square
    }
    return s1 * s2_cache.at({q2, ctx.L == 1 ? 1 : mod_pos(q1, ctx.L)});
  };

  const i64 chunk = 16;
  i64 n_chunks = (X + chunk - 1) / chunk;
  struct Part {
    i64 plain = 0;
    double over_q3 = 0;
  };
  auto partials = parallel_map_chunks<Part>(n_chunks, threads, [&](i64 ci) {
    Part part;
    for (i64 q = ci * chunk + 1; q <= std::min(X, (ci + 1) * chunk); ++q) {
      i64 s = eval_q(q);
      part.plain += s;
      part.over_q3 += double(s) / (double(q) * double(q) * double(q));
    }
    return part;
  });
  S0Partials out;
  for (auto& p : partials) {
    out.sum_plain += p.plain;
    out.sum_over_q3 += p.over_q3;
  }
  return out;
}

std::vector<i64> omega_smooth_upto(i64 omega, i64 bound) {
  std::vector<i64> primes;
  for (auto& [p, e] : arith::factorize(omega)) primes.push_back(p);
  std::vector<i64> out{1};
  for (i64 p : primes) {
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i) {
      i64 v = out[i];
      while (v <= bound / p) {
        v *= p;
        out.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<i64> squarefull_coprime_upto(i64 omega, i64 bound) {
  std::set<i64> vals;
  for (i64 a = 1; a * a <= bound; ++a) {
    if (std::gcd(a, omega) != 1) continue;
    for (i64 b = 1;; ++b) {
      if (arith::mobius(b) == 0) continue;
      if (std::gcd(b, omega) != 1) continue;
      __int128 x = (__int128)a * a * b * b * b;
      if (x > bound) break;
      vals.insert((i64)x);
    }
  }
  return std::vector<i64>(vals.begin(), vals.end());
}

} // namespace conelab::expsums
