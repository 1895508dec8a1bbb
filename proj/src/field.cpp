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

#include "rcurves/field.hpp"

#include <cctype>

namespace rcurves {

std::string rational_to_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str();
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw ConfigError("empty string is not a rational number");
  for (char ch : s) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
      throw ConfigError("malformed rational number: \"" + s + "\"");
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw ConfigError("malformed rational number: \"" + s + "\"");
  if (r.get_den() == 0) throw ConfigError("zero denominator in rational number: \"" + s + "\"");
  r.canonicalize();
  return r;
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set decides primality for every 64-bit integer.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void validate_field_config(const FieldConfig& cfg) {
  if (cfg.kind == FieldKind::rationals) return;
  if (cfg.prime < (1ULL << 20))
    throw ConfigError("prime must be at least 2^20, got " + std::to_string(cfg.prime));
  if (cfg.prime > (1ULL << 62))
    throw ConfigError("prime must be at most 2^62, got " + std::to_string(cfg.prime));
  if (!is_prime_u64(cfg.prime))
    throw ConfigError(std::to_string(cfg.prime) + " is not prime");
}

PrimeField::Elem PrimeField::from_rational(const Rational& r) const {
  Rational c = r;
  c.canonicalize();
  mpz_class num = c.get_num();
  mpz_class den = c.get_den();
  mpz_class p(std::to_string(p_));
  mpz_class nm = num % p;
  if (nm < 0) nm += p;
  mpz_class dm = den % p;
  if (dm == 0)
    throw ConfigError("rational " + rational_to_string(r) + " has denominator divisible by the prime");
  Elem n = static_cast<Elem>(nm.get_ui());
  Elem d = static_cast<Elem>(dm.get_ui());
  return div(n, d);
}

}  // namespace rcurves
