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

// Paillier signatures over raw integers and the index-stamped authenticated
// send/receive built on top of them.

#ifndef PTES_SIGNATURE_H_
#define PTES_SIGNATURE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ptes/numtheory.h"
#include "ptes/paillier.h"

namespace ptes::signature {

struct Signature {
  BigNat s1;
  BigNat s2;
};

// (index <-> message, s1, s2) as it travels over a link.
struct SignedTriple {
  std::string signer_id;
  BigNat z;
  BigNat s1;
  BigNat s2;

  friend bool operator==(const SignedTriple&, const SignedTriple&) = default;
};

struct VerifyOutcome {
  bool flag = false;               // true: authentic
  std::optional<BigNat> message;  // empty whenever flag is false
};

// s1 = L(m^nu mod alpha^2) * pi mod alpha,
// s2 = (m * beta^-s1 mod alpha)^(alpha^-1 mod nu) mod alpha.
// Deterministic. Throws kMessageOutOfRange unless 0 <= m < alpha^2 and
// kUnsignableMessage when gcd(m, alpha) != 1.
Signature Sign(const paillier::KeySet& keys, const BigNat& m);

// m == beta^s1 * s2^alpha mod alpha^2 with s1, s2 reduced into Z_alpha.
// Anything out of range is simply rejected.
bool Verify(const paillier::PublicKey& pk, const BigNat& m, const BigNat& s1,
            const BigNat& s2);

// Signs z = index <-> m. Without `message_width` the message occupies
// NumDigits(m) digits; with it, m is left-padded to exactly that many digits,
// which lets the receiver reject triples whose total length is off.
// index >= 1 (kIndexError otherwise).
SignedTriple AuthSend(const paillier::KeySet& keys, const BigNat& m,
                      std::uint64_t index,
                      std::optional<std::size_t> message_width = std::nullopt);

// Accepts iff the signature verifies under pk and the leading
// NumDigits(expected_index) digits of z spell expected_index (and, with a
// width, z has exactly that many more digits). The message is whatever
// follows the prefix.
VerifyOutcome AuthReceive(
    const paillier::PublicKey& pk, const SignedTriple& triple,
    std::uint64_t expected_index,
    std::optional<std::size_t> message_width = std::nullopt);

}  // namespace ptes::signature

#endif  // PTES_SIGNATURE_H_
