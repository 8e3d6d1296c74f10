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

#include "ptes/signature.h"

#include "ptes/error.h"
#include "ptes/packing.h"

namespace ptes::signature {

Signature Sign(const paillier::KeySet& keys, const BigNat& m) {
  const paillier::PublicKey& pk = keys.public_key();
  if (m < 0 || m >= pk.alpha_squared) {
    throw Error(ErrorCode::kMessageOutOfRange,
                "message must lie in [0, alpha^2) for key '" + pk.key_id + "'");
  }
  if (numtheory::Gcd(m, pk.alpha) != 1) {
    throw Error(ErrorCode::kUnsignableMessage,
                "message shares a factor with alpha");
  }
  Signature sig;
  sig.s1 = keys.Logarithm(m);
  BigNat w = m % pk.alpha;
  if (!pk.simple_generator) {
    // beta^-s1 mod alpha; for beta = alpha + 1 this is 1.
    const BigNat g = numtheory::ModExp(pk.beta % pk.alpha, sig.s1, pk.alpha);
    w = w * numtheory::ModInv(g, pk.alpha) % pk.alpha;
  }
  sig.s2 = keys.AlphaRoot(w);
  return sig;
}

bool Verify(const paillier::PublicKey& pk, const BigNat& m, const BigNat& s1,
            const BigNat& s2) {
  if (m < 0 || m >= pk.alpha_squared) return false;
  if (s1 < 0 || s1 >= pk.alpha || s2 <= 0 || s2 >= pk.alpha) return false;
  BigNat rhs;
  mpz_powm(rhs.get_mpz_t(), s2.get_mpz_t(), pk.alpha.get_mpz_t(),
           pk.alpha_squared.get_mpz_t());
  rhs = rhs * pk.GeneratorPow(s1) % pk.alpha_squared;
  return rhs == m;
}

SignedTriple AuthSend(const paillier::KeySet& keys, const BigNat& m,
                      std::uint64_t index,
                      std::optional<std::size_t> message_width) {
  if (index < 1) throw Error(ErrorCode::kIndexError, "indices start at 1");
  if (m < 0) throw Error(ErrorCode::kMessageOutOfRange, "negative message");
  const std::size_t width = message_width.value_or(packing::NumDigits(m));
  SignedTriple triple;
  triple.signer_id = keys.key_id();
  triple.z = packing::Concat(BigNat(static_cast<unsigned long>(index)), m, width);
  Signature sig = Sign(keys, triple.z);
  triple.s1 = std::move(sig.s1);
  triple.s2 = std::move(sig.s2);
  return triple;
}

VerifyOutcome AuthReceive(const paillier::PublicKey& pk,
                          const SignedTriple& triple,
                          std::uint64_t expected_index,
                          std::optional<std::size_t> message_width) {
  VerifyOutcome rejected;
  if (expected_index < 1) return rejected;
  if (!Verify(pk, triple.z, triple.s1, triple.s2)) return rejected;

  const BigNat index(static_cast<unsigned long>(expected_index));
  const std::size_t index_digits = packing::NumDigits(index);
  const std::size_t z_digits = packing::NumDigits(triple.z);
  if (z_digits <= index_digits) return rejected;
  if (message_width && z_digits != index_digits + *message_width) {
    return rejected;
  }
  const std::size_t tail = z_digits - index_digits;
  if (packing::SliceDigits(triple.z, 1, index_digits, z_digits) != index) {
    return rejected;
  }
  return VerifyOutcome{
      .flag = true,
      .message = packing::SliceDigits(triple.z, index_digits + 1,
                                      index_digits + tail, z_digits)};
}

}  // namespace ptes::signature
