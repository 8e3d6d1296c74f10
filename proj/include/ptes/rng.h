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

#ifndef PTES_RNG_H_
#define PTES_RNG_H_

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ptes {

// Mixes a base seed with a list of stream tags (splitmix64 finalizer), so that
// independent streams (per cycle, per agent, per link) can be derived from one
// user seed without sharing state.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> tags);

// Seeded 64-bit Mersenne Twister feeding both big integers and scalars.
// Not cryptographically strong. Not copyable; one instance belongs to one
// thread of control.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  // Uniform in [0, bound). Throws kDomainError unless bound is positive.
  mpz_class Below(const mpz_class& bound);
  // Uniform integer with at most `bits` bits.
  mpz_class Bits(unsigned long bits);

  std::uint64_t NextU64();
  // Uniform in [lo, hi], inclusive.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ptes

#endif  // PTES_RNG_H_
