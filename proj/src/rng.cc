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

#include "ptes/rng.h"

#include <limits>
#include <vector>

#include "ptes/error.h"

namespace ptes {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = Mix(seed);
  for (std::uint64_t tag : tags) h = Mix(h ^ Mix(tag + 0x632be59bd9b4e019ULL));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

mpz_class Rng::Below(const mpz_class& bound) {
  if (bound <= 0) throw Error(ErrorCode::kDomainError, "Below needs a positive bound");
  const unsigned long bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  mpz_class out;
  do {
    out = Bits(bits);
  } while (out >= bound);
  return out;
}

mpz_class Rng::Bits(unsigned long bits) {
  const std::size_t words = (bits + 63) / 64;
  if (words == 0) return 0;
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = engine_();
  if (bits % 64) buf.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  mpz_class out;
  mpz_import(out.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0,
             buf.data());
  return out;
}

std::uint64_t Rng::NextU64() { return engine_(); }

std::int64_t Rng::UniformInt(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(NextU64());
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

}  // namespace ptes
