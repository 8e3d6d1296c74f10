/*
 * Copyright 2026 The ptes Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ptes/numtheory.h"

#include <array>
#include <vector>

#include "ptes/error.h"

namespace ptes {

BigNat BigNatFromString(const std::string& decimal) {
  BigNat out;
  if (decimal.empty() || decimal.find_first_not_of("0123456789") !=
                             std::string::npos ||
      out.set_str(decimal, 10) != 0) {
    throw Error(ErrorCode::kDomainError,
                "not a non-negative decimal integer: '" + decimal + "'");
  }
  return out;
}

std::string ToDecimal(const BigNat& x) { return x.get_str(10); }

unsigned long BitLength(const BigNat& x) {
  if (x == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

namespace numtheory {
namespace {

// Odd primes below 2000, for the sieve that runs before Miller-Rabin.
const std::vector<unsigned long>& SmallPrimes() {
  static const std::vector<unsigned long> primes = [] {
    constexpr unsigned long kLimit = 2000;
    std::vector<bool> composite(kLimit, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 3; i < kLimit; i += 2) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j < kLimit; j += 2 * i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool MillerRabinRound(const BigNat& n, const BigNat& n_minus_1,
                      const BigNat& d, unsigned long s, const BigNat& a) {
  BigNat x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

bool IsProbablePrime(const BigNat& n, Rng& rng, int rounds) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (mpz_even_p(n.get_mpz_t())) return false;
  for (unsigned long p : SmallPrimes()) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  const BigNat n_minus_1 = n - 1;
  BigNat d = n_minus_1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  // Bases uniform in [2, n-2].
  const BigNat base_span = n - 3;
  for (int i = 0; i < rounds; ++i) {
    BigNat a = rng.Below(base_span) + 2;
    if (!MillerRabinRound(n, n_minus_1, d, s, a)) return false;
  }
  return true;
}

BigNat GenPrime(unsigned long bits, Rng& rng) {
  if (bits < 3) throw Error(ErrorCode::kDomainError, "prime bits must be >= 3");
  while (true) {
    BigNat candidate = rng.Bits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (IsProbablePrime(candidate, rng)) return candidate;
  }
}

BigNat ModExp(const BigNat& base, const BigNat& exp, const BigNat& modulus) {
  if (modulus < 2) throw Error(ErrorCode::kDomainError, "modulus must be >= 2");
  BigNat out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  return out;
}

BigNat ModInv(const BigNat& a, const BigNat& n) {
  if (n < 2) throw Error(ErrorCode::kDomainError, "modulus must be >= 2");
  BigNat out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kNoInverse,
                ToDecimal(a) + " has no inverse modulo " + ToDecimal(n));
  }
  return out;
}

BigNat Gcd(const BigNat& a, const BigNat& b) {
  BigNat out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigNat Lcm(const BigNat& a, const BigNat& b) {
  if (a < 1 || b < 1) throw Error(ErrorCode::kDomainError, "lcm needs a, b >= 1");
  BigNat out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

BigNat SampleCoprime(const BigNat& n, Rng& rng) {
  if (n < 2) throw Error(ErrorCode::kDomainError, "modulus must be >= 2");
  const BigNat span = n - 1;
  while (true) {
    BigNat r = rng.Below(span) + 1;
    if (Gcd(r, n) == 1) return r;
  }
}

}  // namespace numtheory
}  // namespace ptes
