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

#include "ptes/packing.h"

#include <string>

#include "ptes/error.h"

namespace ptes::packing {

std::size_t NumDigits(const BigNat& x) {
  if (x < 0) throw Error(ErrorCode::kDomainError, "negative value");
  if (x == 0) return 1;
  // mpz_sizeinbase may overshoot by one for bases other than powers of two.
  std::size_t d = mpz_sizeinbase(x.get_mpz_t(), 10);
  if (d > 1 && x < Pow10(d - 1)) --d;
  return d;
}

BigNat Pow10(std::size_t k) {
  BigNat out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, k);
  return out;
}

BigNat Concat(const BigNat& x, const BigNat& y, std::size_t y_width) {
  if (y_width == 0 || NumDigits(y) > y_width) {
    throw Error(ErrorCode::kSlotOverflow,
                ToDecimal(y) + " does not fit in " + std::to_string(y_width) +
                    " digits");
  }
  return x * Pow10(y_width) + y;
}

BigNat SliceDigits(const BigNat& x, std::size_t a, std::size_t b,
                   std::size_t total_width) {
  if (a < 1 || a > b || b > total_width || NumDigits(x) > total_width) {
    throw Error(ErrorCode::kIndexError,
                "digits " + std::to_string(a) + ".." + std::to_string(b) +
                    " of a " + std::to_string(total_width) + "-digit field");
  }
  BigNat shifted;
  mpz_tdiv_q(shifted.get_mpz_t(), x.get_mpz_t(),
             Pow10(total_width - b).get_mpz_t());
  BigNat out;
  mpz_tdiv_r(out.get_mpz_t(), shifted.get_mpz_t(),
             Pow10(b - a + 1).get_mpz_t());
  return out;
}

BigNat Pack(std::span<const BigNat> values, const PackSpec& spec) {
  if (values.size() != spec.count) {
    throw Error(ErrorCode::kSpecMismatch,
                "expected " + std::to_string(spec.count) + " slots, got " +
                    std::to_string(values.size()));
  }
  const BigNat base = Pow10(spec.width);
  BigNat acc = 0;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it < 0 || NumDigits(*it) > spec.width) {
      throw Error(ErrorCode::kSlotOverflow,
                  ToDecimal(*it) + " does not fit in " +
                      std::to_string(spec.width) + " digits");
    }
    acc = acc * base + *it;
  }
  return acc;
}

std::vector<BigNat> Unpack(const BigNat& packed, const PackSpec& spec) {
  if (packed < 0 || packed >= Pow10(spec.width * spec.count)) {
    throw Error(ErrorCode::kSpecMismatch,
                "packed value wider than " +
                    std::to_string(spec.width * spec.count) + " digits");
  }
  const BigNat base = Pow10(spec.width);
  std::vector<BigNat> out;
  out.reserve(spec.count);
  BigNat rest = packed;
  for (std::size_t i = 0; i < spec.count; ++i) {
    BigNat slot;
    mpz_tdiv_qr(rest.get_mpz_t(), slot.get_mpz_t(), rest.get_mpz_t(),
                base.get_mpz_t());
    out.push_back(std::move(slot));
  }
  return out;
}

BigNat PackedAlphaBound(std::size_t count, const BigNat& column_bound) {
  if (count < 1 || column_bound < 1) {
    throw Error(ErrorCode::kDomainError, "count and column bound must be >= 1");
  }
  const std::size_t w = NumDigits(column_bound);
  const BigNat repunit = (Pow10(count * w) - 1) / (Pow10(w) - 1);
  return repunit * column_bound;
}

}  // namespace ptes::packing
