// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "conelab/util.hpp"

namespace conelab::arith {

using Factorization = std::vector<std::pair<i64, int>>; // (prime, exponent), ascending

Factorization factorize(i64 n);
bool is_prime(i64 n);
i64 mobius(i64 n);
i64 euler_phi(i64 n);
i64 radical(i64 n);

/// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(i64 a, i64 n);

/// Kronecker symbol (a/n), the usual extension of Jacobi to all n >= 1 and
/// arbitrary a (used to match characters against (xi/.) for signed xi).
int kronecker(i64 a, i64 n);

/// Quadratic Gauss sum iota_q = sum_{a mod q} e_q(a^2) for odd q >= 1:
/// sqrt(q) for q = 1 mod 4, i*sqrt(q) for q = 3 mod 4.
cplx gauss_iota(i64 q);

/// q = q1*q2 with gcd(q1, omega) = 1 and every prime of q2 dividing omega.
std::pair<i64, i64> omega_split(i64 q, i64 omega);

/// Real Dirichlet character mod L: a value table over Z/L with entries in
/// {-1,0,+1}, nonzero exactly on units.
struct RealCharacter {
  i64 modulus = 1;
  std::vector<int8_t> values; // size modulus
  bool principal = true;

  int operator()(i64 n) const { return values[(size_t)mod_pos(n, modulus)]; }
};

/// All real characters mod L (including the principal one, flagged).
std::vector<RealCharacter> real_characters(i64 L);

/// L(1, chi) for non-principal chi, via partial sums with an Abel tail bound;
/// the documented error is <= modulus/terms.
double l_one(const RealCharacter& chi, i64 terms);

/// Mobius values mu(1..N) by linear sieve.
std::vector<int8_t> mobius_sieve(i64 N);

/// Smallest-prime-factor sieve for 1..N.
std::vector<int32_t> spf_sieve(i64 N);

std::vector<i64> units_mod(i64 L);

/// x = a mod m1, x = b mod m2 for coprime m1, m2; returns x mod m1*m2.
i64 crt_pair(i64 a, i64 m1, i64 b, i64 m2);

} // namespace conelab::arith
