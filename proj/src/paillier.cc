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

#include "ptes/paillier.h"

#include <utility>

#include "ptes/error.h"
#include "paillier_internal.h"

namespace ptes::paillier {
namespace {

// Keygen gives up after this many rejected candidate moduli, which only
// happens when the bound leaves (almost) no room below 2^bits.
constexpr int kMaxKeygenAttempts = 4096;

BigNat Mod(const BigNat& a, const BigNat& n) {
  BigNat out;
  mpz_mod(out.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return out;
}

BigNat Powm(const BigNat& base, const BigNat& exp, const BigNat& mod) {
  BigNat out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

// L_n(x) = (x - 1) / n
BigNat L(const BigNat& x, const BigNat& n) {
  BigNat out = x - 1;
  mpz_fdiv_q(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
  return out;
}

BigNat DrawGenerator(const BigNat& alpha, const BigNat& alpha_squared,
                     const BigNat& nu, GeneratorChoice choice, Rng& rng) {
  if (choice == GeneratorChoice::kAlphaPlusOne) return alpha + 1;
  // Retries without bound; a draw fails with negligible probability.
  while (true) {
    BigNat beta = rng.Below(alpha_squared);
    if (beta == 0 || numtheory::Gcd(beta, alpha) != 1) continue;
    BigNat l = L(Powm(beta, nu, alpha_squared), alpha);
    if (numtheory::Gcd(l, alpha) == 1) return beta;
  }
}

}  // namespace

namespace internal {

KeySet KeygenLoop(unsigned long bits, const BigNat& plaintext_bound,
                  const internal::PrimeSource& next_pair, Rng& rng,
                  const KeygenOptions& options) {
  if (bits < 6) throw Error(ErrorCode::kDomainError, "key bits must be >= 6");
  if (plaintext_bound < 1) {
    throw Error(ErrorCode::kDomainError, "plaintext bound must be >= 1");
  }
  BigNat ceiling = 1;
  ceiling <<= bits;
  if (plaintext_bound >= ceiling) {
    throw Error(ErrorCode::kBoundUnsatisfiable,
                "no " + std::to_string(bits) + "-bit modulus exceeds " +
                    ToDecimal(plaintext_bound));
  }
  for (int attempt = 0; attempt < kMaxKeygenAttempts; ++attempt) {
    auto [p, q] = next_pair();
    if (p == q) continue;
    const BigNat alpha = p * q;
    if (BitLength(alpha) != bits || alpha <= plaintext_bound) continue;
    if (!IsAdmissiblePrimePair(p, q)) continue;
    const BigNat nu = numtheory::Lcm(p - 1, q - 1);
    const BigNat beta =
        DrawGenerator(alpha, alpha * alpha, nu, options.generator, rng);
    return KeySet::FromComponents(options.key_id, p, q, beta);
  }
  throw Error(ErrorCode::kBoundUnsatisfiable,
              "gave up finding a " + std::to_string(bits) +
                  "-bit modulus above " + ToDecimal(plaintext_bound));
}

}  // namespace internal

PublicKey PublicKey::Make(std::string key_id, const BigNat& alpha,
                          const BigNat& beta) {
  PublicKey pk;
  pk.key_id = std::move(key_id);
  pk.alpha = alpha;
  pk.beta = beta;
  pk.alpha_squared = alpha * alpha;
  pk.bits = BitLength(alpha);
  pk.simple_generator = (beta == alpha + 1);
  return pk;
}

BigNat PublicKey::GeneratorPow(const BigNat& x) const {
  if (simple_generator) {
    // (1 + alpha)^x == 1 + x*alpha (mod alpha^2)
    return Mod(1 + Mod(x, alpha) * alpha, alpha_squared);
  }
  return Powm(beta, x, alpha_squared);
}

KeySet KeySet::FromComponents(std::string key_id, const BigNat& p,
                              const BigNat& q, const BigNat& beta) {
  if (p < 3 || q < 3 || !IsAdmissiblePrimePair(p, q)) {
    throw Error(ErrorCode::kInvalidKey,
                "prime pair (" + ToDecimal(p) + ", " + ToDecimal(q) +
                    ") violates gcd(pq, (p-1)(q-1)) = 1");
  }
  KeySet ks;
  ks.p_ = p;
  ks.q_ = q;
  const BigNat alpha = p * q;
  ks.public_ = PublicKey::Make(std::move(key_id), alpha, beta);
  const BigNat& alpha_squared = ks.public_.alpha_squared;
  if (beta <= 0 || beta >= alpha_squared || numtheory::Gcd(beta, alpha) != 1) {
    throw Error(ErrorCode::kInvalidKey, "beta is not in Z*_{alpha^2}");
  }
  ks.nu_ = numtheory::Lcm(p - 1, q - 1);
  const BigNat l = L(Powm(beta, ks.nu_, alpha_squared), alpha);
  if (numtheory::Gcd(l, alpha) != 1) {
    throw Error(ErrorCode::kInvalidKey, "pi does not exist for this beta");
  }
  ks.pi_ = numtheory::ModInv(l, alpha);

  ks.p_squared_ = p * p;
  ks.q_squared_ = q * q;
  ks.p_minus_1_ = p - 1;
  ks.q_minus_1_ = q - 1;
  ks.h_p_ = numtheory::ModInv(
      L(Powm(Mod(beta, ks.p_squared_), ks.p_minus_1_, ks.p_squared_), p), p);
  ks.h_q_ = numtheory::ModInv(
      L(Powm(Mod(beta, ks.q_squared_), ks.q_minus_1_, ks.q_squared_), q), q);
  ks.root_exp_p_ = numtheory::ModInv(Mod(alpha, ks.p_minus_1_), ks.p_minus_1_);
  ks.root_exp_q_ = numtheory::ModInv(Mod(alpha, ks.q_minus_1_), ks.q_minus_1_);
  ks.q_inv_p_ = numtheory::ModInv(q, p);
  return ks;
}

BigNat KeySet::Logarithm(const BigNat& x) const {
  const BigNat m_p =
      Mod(L(Powm(Mod(x, p_squared_), p_minus_1_, p_squared_), p_) * h_p_, p_);
  const BigNat m_q =
      Mod(L(Powm(Mod(x, q_squared_), q_minus_1_, q_squared_), q_) * h_q_, q_);
  return m_q + q_ * Mod((m_p - m_q) * q_inv_p_, p_);
}

BigNat KeySet::AlphaRoot(const BigNat& x) const {
  const BigNat s_p = Powm(Mod(x, p_), root_exp_p_, p_);
  const BigNat s_q = Powm(Mod(x, q_), root_exp_q_, q_);
  return s_q + q_ * Mod((s_p - s_q) * q_inv_p_, p_);
}

bool IsAdmissiblePrimePair(const BigNat& p, const BigNat& q) {
  if (p == q || p < 2 || q < 2) return false;
  return numtheory::Gcd(p * q, (p - 1) * (q - 1)) == 1;
}

KeySet Keygen(unsigned long bits, const BigNat& plaintext_bound, Rng& rng,
              const KeygenOptions& options) {
  const unsigned long p_bits = (bits + 1) / 2;
  const unsigned long q_bits = bits / 2;
  return internal::KeygenLoop(
      bits, plaintext_bound,
      [&]() {
        BigNat p = numtheory::GenPrime(p_bits, rng);
        BigNat q = numtheory::GenPrime(q_bits, rng);
        return std::make_pair(std::move(p), std::move(q));
      },
      rng, options);
}

Ciphertext Encrypt(const PublicKey& pk, const BigNat& pt, Rng& rng) {
  if (pt < 0 || pt >= pk.alpha) {
    throw Error(ErrorCode::kPlaintextOutOfRange,
                "plaintext must lie in [0, alpha)");
  }
  return internal::EncryptWithNonce(pk, pt,
                                   numtheory::SampleCoprime(pk.alpha, rng));
}

BigNat Decrypt(const KeySet& keys, const Ciphertext& ct) {
  if (ct.key_id != keys.key_id()) {
    throw Error(ErrorCode::kKeyMismatch, "ciphertext made under key '" +
                                             ct.key_id + "', not '" +
                                             keys.key_id() + "'");
  }
  if (ct.value < 0 || ct.value >= keys.public_key().alpha_squared) {
    throw Error(ErrorCode::kCiphertextOutOfRange,
                "ciphertext must lie in [0, alpha^2)");
  }
  return keys.Logarithm(ct.value);
}

Ciphertext AddCiphertexts(const PublicKey& pk, std::span<const Ciphertext> cts) {
  if (cts.empty()) {
    throw Error(ErrorCode::kEmptyAggregation, "nothing to aggregate");
  }
  Ciphertext out{1, pk.key_id};
  for (const Ciphertext& ct : cts) {
    if (ct.key_id != pk.key_id) {
      throw Error(ErrorCode::kKeyMismatch,
                  "mixed keys in aggregation: '" + ct.key_id + "'");
    }
    out.value *= ct.value;
    out.value %= pk.alpha_squared;
  }
  return out;
}

namespace internal {

Ciphertext EncryptWithNonce(const PublicKey& pk, const BigNat& pt,
                            const BigNat& r) {
  if (pt < 0 || pt >= pk.alpha) {
    throw Error(ErrorCode::kPlaintextOutOfRange,
                "plaintext must lie in [0, alpha)");
  }
  BigNat value = pk.GeneratorPow(pt) * Powm(r, pk.alpha, pk.alpha_squared);
  value %= pk.alpha_squared;
  return Ciphertext{std::move(value), pk.key_id};
}


}  // namespace internal
}  // namespace ptes::paillier
