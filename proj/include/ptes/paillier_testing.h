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

// Forced-randomness hooks for reproducing small worked examples. Test code
// only; the CLI never links against these entry points.

#ifndef PTES_PAILLIER_TESTING_H_
#define PTES_PAILLIER_TESTING_H_

#include <functional>
#include <utility>

#include "ptes/paillier.h"

namespace ptes::paillier::testing {

// Encrypt with a caller-chosen nonce r (must lie in Z*_alpha).
Ciphertext EncryptWithNonce(const PublicKey& pk, const BigNat& pt,
                            const BigNat& r);

using PrimeSource = std::function<std::pair<BigNat, BigNat>()>;

// Keygen loop driven by caller-provided prime pairs. Pairs that fail the
// length, gcd, or bound conditions are discarded and the source is asked
// again, exactly as the random path does.
KeySet KeygenFromSource(unsigned long bits, const BigNat& plaintext_bound,
                        const PrimeSource& next_pair, Rng& rng,
                        const KeygenOptions& options = {});

}  // namespace ptes::paillier::testing

#endif  // PTES_PAILLIER_TESTING_H_
