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

// Decimal digit arithmetic for packing many fixed-width slots into one
// plaintext. Slot 1 is the least significant slot, so cutting the decrypted
// integer from right to left returns slots in grid order.

#ifndef PTES_PACKING_H_
#define PTES_PACKING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ptes/numtheory.h"

namespace ptes::packing {

struct PackSpec {
  std::size_t width = 1;  // decimal digits per slot
  std::size_t count = 1;  // number of slots
};

// Decimal digit count; NumDigits(0) == 1.
std::size_t NumDigits(const BigNat& x);

BigNat Pow10(std::size_t k);

// x * 10^y_width + y. Throws kSlotOverflow if y needs more than y_width
// digits.
BigNat Concat(const BigNat& x, const BigNat& y, std::size_t y_width);

// Digits a..b (1-based, leftmost first) of x left-padded with zeros to
// total_width digits. Throws kIndexError unless 1 <= a <= b <= total_width
// and NumDigits(x) <= total_width.
BigNat SliceDigits(const BigNat& x, std::size_t a, std::size_t b,
                   std::size_t total_width);

// sum_l values[l] * 10^(l * width), l counted from zero.
BigNat Pack(std::span<const BigNat> values, const PackSpec& spec);

// Inverse of Pack; leading zero slots are restored.
std::vector<BigNat> Unpack(const BigNat& packed, const PackSpec& spec);

// ((10^(count*w) - 1) / (10^w - 1)) * column_bound with
// w = NumDigits(column_bound): a strict upper bound on any sum of packings
// whose per-slot column sums stay below column_bound.
BigNat PackedAlphaBound(std::size_t count, const BigNat& column_bound);

}  // namespace ptes::packing

#endif  // PTES_PACKING_H_
