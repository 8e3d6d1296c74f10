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

// Paillier additively homomorphic encryption (key generation, encryption,
// decryption, ciphertext aggregation). The same key sets back the Paillier
// signature scheme in signature.h.

#ifndef PTES_PAILLIER_H_
#define PTES_PAILLIER_H_

#include <span>
#include <string>

#include "ptes/numtheory.h"
#include "ptes/rng.h"

namespace ptes::paillier {

// The public half of a key set: modulus alpha = p*q and generator beta.
struct PublicKey {
  std::string key_id;
  unsigned long bits = 0;
  BigNat alpha;
  BigNat beta;
  BigNat alpha_squared;
  // beta == alpha + 1 lets beta^x mod alpha^2 collapse to 1 + x*alpha.
  bool simple_generator = false;

  static PublicKey Make(std::string key_id, const BigNat& alpha,
                        const BigNat& beta);

  // beta^x mod alpha^2.
  BigNat GeneratorPow(const BigNat& x) const;
};

struct Ciphertext {
  BigNat value;
  std::string key_id;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// Private key material (p, q, nu, pi) plus CRT tables. Immutable once built.
class KeySet {
 public:
  // Validates the key conditions: p != q prime-like inputs, gcd(pq,
  // (p-1)(q-1)) == 1, beta in Z*_{alpha^2}, and pi exists. Throws
  // kInvalidKey otherwise.
  static KeySet FromComponents(std::string key_id, const BigNat& p,
                               const BigNat& q, const BigNat& beta);

  const PublicKey& public_key() const { return public_; }
  const std::string& key_id() const { return public_.key_id; }
  unsigned long bits() const { return public_.bits; }
  const BigNat& alpha() const { return public_.alpha; }
  const BigNat& beta() const { return public_.beta; }
  const BigNat& p() const { return p_; }
  const BigNat& q() const { return q_; }
  const BigNat& nu() const { return nu_; }
  const BigNat& pi() const { return pi_; }

  // L(x^nu mod alpha^2) * pi mod alpha, evaluated through CRT. x must be a
  // unit modulo alpha^2. Shared by decryption and the first signature value.
  BigNat Logarithm(const BigNat& x) const;
  // x^(alpha^-1 mod nu) mod alpha through CRT; x must be a unit modulo alpha.
  BigNat AlphaRoot(const BigNat& x) const;

 private:
  KeySet() = default;

  PublicKey public_;
  BigNat p_, q_, nu_, pi_;
  BigNat p_squared_, q_squared_;
  BigNat p_minus_1_, q_minus_1_;
  BigNat h_p_, h_q_;            // CRT decryption constants
  BigNat root_exp_p_, root_exp_q_;  // alpha^-1 mod (p-1), mod (q-1)
  BigNat q_inv_p_;              // q^-1 mod p
};

enum class GeneratorChoice {
  kAlphaPlusOne,
  // Uniform beta in Z*_{alpha^2}, redrawn until pi exists.
  kRandom,
};

struct KeygenOptions {
  std::string key_id = "key";
  GeneratorChoice generator = GeneratorChoice::kAlphaPlusOne;
};

// True iff p != q and gcd(pq, (p-1)(q-1)) == 1.
bool IsAdmissiblePrimePair(const BigNat& p, const BigNat& q);

// Generates a key set whose alpha has exactly `bits` binary digits and
// exceeds plaintext_bound. bits >= 6. Throws kBoundUnsatisfiable when
// plaintext_bound >= 2^bits, or when no admissible alpha above the bound
// turns up within a bounded number of regenerations.
KeySet Keygen(unsigned long bits, const BigNat& plaintext_bound, Rng& rng,
              const KeygenOptions& options = {});

// beta^pt * r^alpha mod alpha^2 for a fresh r in Z*_alpha.
// Throws kPlaintextOutOfRange unless pt < alpha.
Ciphertext Encrypt(const PublicKey& pk, const BigNat& pt, Rng& rng);

// Throws kKeyMismatch for a foreign ciphertext and kCiphertextOutOfRange
// for values >= alpha^2.
BigNat Decrypt(const KeySet& keys, const Ciphertext& ct);

// Product of the ciphertexts mod alpha^2, i.e. an encryption of the plaintext
// sum (modulo alpha).
Ciphertext AddCiphertexts(const PublicKey& pk, std::span<const Ciphertext> cts);

}  // namespace ptes::paillier

#endif  // PTES_PAILLIER_H_
