// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "conelab/errors.hpp"

namespace conelab {

// Exact rational on int64 with __int128 intermediates. Densities and local
// factors in this project stay far below the overflow range; ops assert it.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) fail(errc::internal, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      fail(errc::internal, "rational overflow");
    return Rational((long long)n, (long long)d);
  }

  Rational operator+(const Rational& o) const {
    return from_i128((__int128)num * o.den + (__int128)o.num * den, (__int128)den * o.den);
  }
  Rational operator-(const Rational& o) const {
    return from_i128((__int128)num * o.den - (__int128)o.num * den, (__int128)den * o.den);
  }
  Rational operator*(const Rational& o) const {
    return from_i128((__int128)num * o.num, (__int128)den * o.den);
  }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) fail(errc::internal, "rational division by zero");
    return from_i128((__int128)num * o.den, (__int128)den * o.num);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  double to_double() const { return double(num) / double(den); }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

} // namespace conelab
