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

// Arbitrary-precision integer helpers shared by the cryptographic modules.
// All values are non-negative; nothing here is constant-time.

#ifndef PTES_NUMTHEORY_H_
#define PTES_NUMTHEORY_H_

#include <gmpxx.h>

#include <string>

#include "ptes/rng.h"

namespace ptes {

using BigNat = mpz_class;

BigNat BigNatFromString(const std::string& decimal);
std::string ToDecimal(const BigNat& x);

// Number of binary digits; BitLength(0) == 0.
unsigned long BitLength(const BigNat& x);

namespace numtheory {

inline constexpr int kMillerRabinRounds = 64;

// Trial division by small primes, then `rounds` Miller-Rabin rounds with bases
// drawn from `rng`.
bool IsProbablePrime(const BigNat& n, Rng& rng,
                     int rounds = kMillerRabinRounds);

// Random prime with exactly `bits` binary digits (top bit set). bits >= 3.
BigNat GenPrime(unsigned long bits, Rng& rng);

// base^exp mod modulus. Throws kDomainError if modulus < 2.
BigNat ModExp(const BigNat& base, const BigNat& exp, const BigNat& modulus);

// x with a*x == 1 (mod n). Throws kNoInverse if gcd(a, n) != 1, kDomainError
// if n < 2.
BigNat ModInv(const BigNat& a, const BigNat& n);

// gcd(a, 0) == a.
BigNat Gcd(const BigNat& a, const BigNat& b);
// Requires a, b >= 1.
BigNat Lcm(const BigNat& a, const BigNat& b);

// Uniform r in [1, n-1] with gcd(r, n) == 1, by rejection. n >= 2.
BigNat SampleCoprime(const BigNat& n, Rng& rng);

}  // namespace numtheory
}  // namespace ptes

#endif  // PTES_NUMTHEORY_H_
