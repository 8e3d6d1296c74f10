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

#ifndef PTES_SRC_PAILLIER_INTERNAL_H_
#define PTES_SRC_PAILLIER_INTERNAL_H_

#include <functional>
#include <utility>

#include "ptes/paillier.h"

namespace ptes::paillier::internal {

using PrimeSource = std::function<std::pair<BigNat, BigNat>()>;

Ciphertext EncryptWithNonce(const PublicKey& pk, const BigNat& pt,
                            const BigNat& r);

KeySet KeygenLoop(unsigned long bits, const BigNat& plaintext_bound,
                  const PrimeSource& next_pair, Rng& rng,
                  const KeygenOptions& options);

}  // namespace ptes::paillier::internal

#endif  // PTES_SRC_PAILLIER_INTERNAL_H_
