// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCURVES_FIELD_HPP
#define RCURVES_FIELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "rcurves/errors.hpp"
#include "rcurves/rng.hpp"

namespace rcurves {

/// Arbitrary-precision rational scalar; the exact stand-in for a generic
/// complex number in every small certified computation.
using Rational = mpq_class;

std::string rational_to_string(const Rational& x);
Rational rational_from_string(const std::string& s);  // accepts "a" and "a/b"

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

enum class FieldKind { rationals, prime_field };

struct FieldConfig {
  FieldKind kind = FieldKind::prime_field;
  std::uint64_t prime = 2147483647ULL;  // 2^31 - 1
  std::uint64_t seed = 42;
};

/// Throws ConfigError unless the prime is an actual prime in [2^20, 2^62].
void validate_field_config(const FieldConfig& cfg);

// Both field types expose the same vocabulary so that all polynomial,
// matrix and geometric code can be written once:
//   Elem, zero, one, from_int, from_rational, add, sub, mul, neg, inv,
//   div, is_zero, eq, random, to_string, name.

struct RationalField {
  using Elem = Rational;

  Elem zero() const { return Rational(0); }
  Elem one() const { return Rational(1); }
  Elem from_int(long long v) const { return Rational(static_cast<long>(v)); }
  Elem from_rational(const Rational& r) const { return r; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw Error("division by zero");
    return Elem(1) / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  /// Uniform integer in [0, 2^31); large enough to emulate a generic point.
  Elem random(SplitRng& rng) const {
    return from_int(static_cast<long long>(rng.below(1ULL << 31)));
  }

  std::string to_string(const Elem& a) const { return rational_to_string(a); }
  std::string name() const { return "rationals"; }
};

/// F_p for a configurable prime p in [2^20, 2^62]; elements are canonical
/// representatives in [0, p).
class PrimeField {
 public:
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {}

  std::uint64_t prime() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p_; }
  Elem from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return static_cast<Elem>(r);
  }
  Elem from_rational(const Rational& r) const;

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    if (s >= p_ || s < a) s -= p_;
    return s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + (p_ - b); }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw Error("division by zero in prime field");
    return pow(a, p_ - 2);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem random(SplitRng& rng) const { return rng.below(p_); }

  std::string to_string(Elem a) const { return std::to_string(a); }
  std::string name() const { return "prime-field"; }

 private:
  std::uint64_t p_;
};

}  // namespace rcurves

#endif  // RCURVES_FIELD_HPP
