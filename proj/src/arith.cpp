// SPDX-License-Identifier: Apache-2.0
#include "conelab/arith.hpp"

#include <algorithm>
#include <map>

namespace conelab::arith {

namespace {

bool miller_rabin(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int r = 0;
  while (d % 2 == 0) d /= 2, ++r;
  // Deterministic for n < 3.3e24 with this base set.
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mod_mul(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

i64 pollard_brent(i64 n) {
  if (n % 2 == 0) return 2;
  Rng rng(u64(n) ^ 0xdeadbeefULL);
  while (true) {
    i64 x = rng.uniform_int(2, n - 2), c = rng.uniform_int(1, n - 1);
    i64 y = x, d = 1;
    auto f = [&](i64 v) { return (mod_mul(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(i64 n, std::map<i64, int>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out[n]++;
    return;
  }
  i64 d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

} // namespace

bool is_prime(i64 n) { return miller_rabin(n); }

Factorization factorize(i64 n) {
  if (n < 1) fail(errc::invalid_argument, "factorize: n must be >= 1");
  std::map<i64, int> acc;
  for (i64 p = 2; p * p <= n && p <= 1'000'000; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      acc[p]++;
      n /= p;
    }
  }
  if (n > 1) factor_rec(n, acc);
  return Factorization(acc.begin(), acc.end());
}

i64 mobius(i64 n) {
  auto f = factorize(n);
  for (auto& [p, e] : f)
    if (e > 1) return 0;
  return f.size() % 2 == 0 ? 1 : -1;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto& [p, e] : factorize(n)) r -= r / p;
  return r;
}

i64 radical(i64 n) {
  i64 r = 1;
  for (auto& [p, e] : factorize(n)) r *= p;
  return r;
}

int jacobi(i64 a, i64 n) {
  if (n < 1 || n % 2 == 0) fail(errc::even_modulus, "jacobi: modulus must be odd and positive");
  a = mod_pos(a, n);
  int r = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 m = n % 8;
      if (m == 3 || m == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

int kronecker(i64 a, i64 n) {
  if (n < 1) fail(errc::invalid_argument, "kronecker: n must be >= 1");
  int r = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    i64 m = mod_pos(a, 8);
    if (m == 3 || m == 5) r = -r;
  }
  return n == 1 ? r : r * jacobi(a, n);
}

cplx gauss_iota(i64 q) {
  if (q < 1 || q % 2 == 0) fail(errc::even_modulus, "gauss_iota: modulus must be odd");
  double s = std::sqrt(double(q));
  return q % 4 == 1 ? cplx{s, 0.0} : cplx{0.0, s};
}

std::pair<i64, i64> omega_split(i64 q, i64 omega) {
  if (q < 1 || omega < 1) fail(errc::invalid_argument, "omega_split: arguments must be >= 1");
  i64 q2 = 1, rest = q;
  for (i64 g = std::gcd(rest, omega); g > 1; g = std::gcd(rest, omega)) {
    rest /= g;
    q2 *= g;
  }
  return {rest, q2};
}

namespace {

// Generators of (Z/p^k)^x. For odd p a single primitive root; for 2^k the
// pair {-1, 5} (k >= 3), {-1} (k == 2), {} (k == 1).
std::vector<std::pair<i64, i64>> unit_group_generators(i64 p, int k, i64 pk) {
  std::vector<std::pair<i64, i64>> gens; // (generator, order)
  if (p == 2) {
    if (k >= 2) gens.push_back({pk - 1, 2});
    if (k >= 3) gens.push_back({5, pk / 4});
    return gens;
  }
  i64 phi = pk / p * (p - 1);
  auto fac = factorize(phi);
  for (i64 g = 2; g < pk; ++g) {
    if (std::gcd(g, pk) != 1) continue;
    bool prim = true;
    for (auto& [q, e] : fac)
      if (mod_pow(g, phi / q, pk) == 1) {
        prim = false;
        break;
      }
    if (prim) {
      gens.push_back({g, phi});
      break;
    }
  }
  return gens;
}

} // namespace

std::vector<RealCharacter> real_characters(i64 L) {
  if (L < 1) fail(errc::invalid_argument, "real_characters: L must be >= 1");
  struct Local {
    i64 pk;
    std::vector<std::pair<i64, i64>> gens;
  };
  std::vector<Local> locals;
  for (auto& [p, e] : factorize(L)) {
    i64 pk = 1;
    for (int i = 0; i < e; ++i) pk *= p;
    locals.push_back({pk, unit_group_generators(p, e, pk)});
  }
  // A character is real iff it sends every generator to +-1; generators of odd
  // order must go to +1.
  std::vector<std::pair<size_t, size_t>> free_slots; // (local index, generator index)
  for (size_t i = 0; i < locals.size(); ++i)
    for (size_t j = 0; j < locals[i].gens.size(); ++j)
      if (locals[i].gens[j].second % 2 == 0) free_slots.push_back({i, j});

  std::vector<RealCharacter> out;
  size_t n_chars = size_t(1) << free_slots.size();
  for (size_t mask = 0; mask < n_chars; ++mask) {
    RealCharacter chi;
    chi.modulus = L;
    chi.values.assign((size_t)L, 0);
    std::map<std::pair<size_t, size_t>, int> sign;
    for (size_t s = 0; s < free_slots.size(); ++s)
      sign[free_slots[s]] = (mask >> s) & 1 ? -1 : 1;

    // Fill the table by walking every unit as a product of generator powers.
    std::function<void(size_t, i64, int)> walk = [&](size_t li, i64 residue, int val) {
      if (li == locals.size()) {
        chi.values[(size_t)residue] = (int8_t)val;
        return;
      }
      const auto& loc = locals[li];
      std::function<void(size_t, i64, int)> spin = [&](size_t gi, i64 r, int v) {
        if (gi == loc.gens.size()) {
          i64 combined = residue;
          // CRT combine: residue mod (product so far), r mod loc.pk
          i64 mprev = 1;
          for (size_t t = 0; t < li; ++t) mprev *= locals[t].pk;
          combined = crt_pair(residue, mprev, r, loc.pk);
          walk(li + 1, combined, val * v);
          return;
        }
        auto [g, ord] = loc.gens[gi];
        int gs = sign.count({li, gi}) ? sign[{li, gi}] : 1;
        i64 cur = 1;
        int cv = 1;
        for (i64 e = 0; e < ord; ++e) {
          spin(gi + 1, mod_mul(r, cur, loc.pk), v * cv);
          cur = mod_mul(cur, g, loc.pk);
          cv *= gs;
        }
      };
      spin(0, 1, 1);
    };
    walk(0, 0, 1); // residue 0 mod 1 seeds the CRT
    chi.principal = true;
    for (i64 n = 0; n < L; ++n)
      if (chi.values[(size_t)n] == -1) chi.principal = false;
    out.push_back(std::move(chi));
  }
  // Principal character first, deterministic order after.
  std::stable_sort(out.begin(), out.end(),
                   [](const RealCharacter& a, const RealCharacter& b) {
                     if (a.principal != b.principal) return a.principal;
                     return a.values < b.values;
                   });
  return out;
}

double l_one(const RealCharacter& chi, i64 terms) {
  if (chi.principal)
    fail(errc::principal_character, "l_one: L(1, chi) requested for the principal character");
  if (terms < chi.modulus) terms = chi.modulus;
  // Sum complete periods; the character sums to zero over each period, so the
  // Abel-summed tail is bounded by modulus/terms.
  i64 N = terms - terms % chi.modulus;
  double s = 0;
  for (i64 n = 1; n <= N; ++n) {
    int v = chi(n);
    if (v != 0) s += double(v) / double(n);
  }
  return s;
}

std::vector<int8_t> mobius_sieve(i64 N) {
  std::vector<int8_t> mu((size_t)N + 1, 0);
  std::vector<int32_t> primes;
  std::vector<char> comp((size_t)N + 1, 0);
  mu[1] = 1;
  for (i64 i = 2; i <= N; ++i) {
    if (!comp[(size_t)i]) {
      primes.push_back((int32_t)i);
      mu[(size_t)i] = -1;
    }
    for (i64 p : primes) {
      if (i * p > N) break;
      comp[(size_t)(i * p)] = 1;
      if (i % p == 0) {
        mu[(size_t)(i * p)] = 0;
        break;
      }
      mu[(size_t)(i * p)] = (int8_t)(-mu[(size_t)i]);
    }
  }
  return mu;
}

std::vector<int32_t> spf_sieve(i64 N) {
  std::vector<int32_t> spf((size_t)N + 1, 0);
  for (i64 i = 2; i <= N; ++i) {
    if (spf[(size_t)i] == 0)
      for (i64 j = i; j <= N; j += i)
        if (spf[(size_t)j] == 0) spf[(size_t)j] = (int32_t)i;
  }
  return spf;
}

std::vector<i64> units_mod(i64 L) {
  std::vector<i64> u;
  for (i64 x = 1; x <= L; ++x)
    if (std::gcd(x, L) == 1) u.push_back(x % L);
  return u;
}

i64 crt_pair(i64 a, i64 m1, i64 b, i64 m2) {
  if (m1 == 1) return mod_pos(b, m2);
  if (m2 == 1) return mod_pos(a, m1);
  i64 inv = mod_inverse(m1 % m2, m2);
  i64 t = mod_pos((b - a) % m2 * inv % m2, m2);
  return mod_pos(a + m1 * t, m1 * m2);
}

} // namespace conelab::arith
