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

#include "ptes/selftest.h"

#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "paillier_internal.h"
#include "ptes/market.h"
#include "ptes/packing.h"
#include "ptes/paillier.h"
#include "ptes/protocol.h"
#include "ptes/signature.h"

namespace ptes::selftest {
namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

// Every plaintext under every nonce, and every plaintext pair.
std::string PaillierExhaustive35() {
  const paillier::KeySet ks = paillier::KeySet::FromComponents("small", 5, 7, 36);
  const paillier::PublicKey& pk = ks.public_key();
  std::size_t checks = 0;
  std::vector<BigNat> units;
  for (unsigned long r = 1; r < 35; ++r) {
    if (std::gcd(r, 35ul) == 1) units.emplace_back(r);
  }
  for (unsigned long m = 0; m < 35; ++m) {
    for (const BigNat& r : units) {
      const auto ct = paillier::internal::EncryptWithNonce(pk, m, r);
      Check(paillier::Decrypt(ks, ct) == m,
            "roundtrip m=" + std::to_string(m) + " r=" + ToDecimal(r));
      ++checks;
    }
  }
  Rng rng(35);
  for (unsigned long a = 0; a < 35; ++a) {
    for (unsigned long b = 0; b < 35; ++b) {
      const paillier::Ciphertext cts[] = {paillier::Encrypt(pk, a, rng),
                                          paillier::Encrypt(pk, b, rng)};
      Check(paillier::Decrypt(ks, paillier::AddCiphertexts(pk, cts)) ==
                (a + b) % 35,
            "homomorphism " + std::to_string(a) + "+" + std::to_string(b));
      ++checks;
    }
  }
  return std::to_string(checks) + " checks";
}

std::string PackSumHomomorphism() {
  using packing::Pack;
  using packing::Unpack;
  const BigNat a = Pack(std::vector<BigNat>{9, 17}, {3, 2});
  const BigNat b = Pack(std::vector<BigNat>{24, 15}, {3, 2});
  Check(a == 17009 && b == 15024, "worked example packing");
  Check(Unpack(a + b, {3, 2}) == std::vector<BigNat>{33, 32},
        "worked example cuts");
  Rng rng(7);
  std::size_t checks = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t width = rng.UniformInt(1, 8);
    const std::size_t count = rng.UniformInt(1, 40);
    const std::size_t members = rng.UniformInt(1, 30);
    const BigNat cap = packing::Pow10(width) / members;
    if (cap == 0) continue;
    std::vector<BigNat> total(count);
    BigNat packed_sum = 0;
    for (std::size_t i = 0; i < members; ++i) {
      std::vector<BigNat> v(count);
      for (std::size_t l = 0; l < count; ++l) {
        v[l] = rng.Below(cap);
        total[l] += v[l];
      }
      packed_sum += Pack(v, {width, count});
    }
    Check(Unpack(packed_sum, {width, count}) == total,
          "sum of packs, trial " + std::to_string(trial));
    ++checks;
  }
  return std::to_string(checks) + " random sums plus worked example";
}

std::string SignatureSmallKey() {
  const paillier::KeySet ks = paillier::KeySet::FromComponents("small", 5, 7, 36);
  std::size_t checks = 0;
  for (unsigned long m = 1; m < 1225; ++m) {
    if (std::gcd(m, 35ul) != 1) continue;
    const signature::Signature sig = signature::Sign(ks, m);
    Check(signature::Verify(ks.public_key(), m, sig.s1, sig.s2),
          "verify m=" + std::to_string(m));
    Check(!signature::Verify(ks.public_key(), (m + 1) % 1225, sig.s1, sig.s2),
          "reject m+1 for m=" + std::to_string(m));
    ++checks;
  }
  return std::to_string(checks) + " messages";
}

std::string ClearingExamples() {
  const market::PriceGrid grid = market::PriceGrid::WithPoints(4, 0.0, 0.01);
  auto curve = [](market::CurveKind k, std::vector<long> v) {
    market::SampledCurve c{k, {}, ""};
    for (long x : v) c.values.emplace_back(x);
    return c;
  };
  const auto s = curve(market::CurveKind::kSupply, {0, 1, 2, 3});
  Check(market::ClearTwoSided(s, curve(market::CurveKind::kDemand, {4, 3, 2, 1}),
                              grid)
                .index == 3,
        "exact intersection");
  Check(market::ClearTwoSided(s, curve(market::CurveKind::kDemand, {3, 2, 1, 0}),
                              grid)
                .index == 2,
        "tie to lower price");
  return "2 examples";
}

std::string AuctionEquivalence() {
  protocol::ProtocolConfig c;
  c.grid = market::PriceGrid::WithPoints(21, 0.0, 0.05);
  c.n_suppliers = 2;
  c.n_customers = 8;
  c.signing_enabled = true;
  c.key_bits = 256;
  market::PopulationParams p;
  p.n_agents = 2;
  p.kind = market::CurveKind::kSupply;
  protocol::CycleInputs in;
  in.supply = market::GenPopulation(p, c.grid);
  p.n_agents = 8;
  p.first_id = 3;
  p.kind = market::CurveKind::kDemand;
  in.demand = market::GenPopulation(p, c.grid);
  const protocol::ClearingResult plain = protocol::ClearPlaintext(c, in);
  protocol::DirectTransport direct;
  const protocol::ClearingResult pw = protocol::RunAuctionPointwise(c, in, direct);
  c.key_bits = 1024;
  const protocol::ClearingResult bl = protocol::RunAuctionBlock(c, in, direct);
  for (const auto* r : {&pw, &bl}) {
    Check(r->demand.values == plain.demand.values &&
              r->supply.values == plain.supply.values &&
              r->clearing.index == plain.clearing.index,
          "encrypted clearing differs from plaintext");
    for (const auto& f : r->flags) Check(f.flag, "clean message flagged");
  }
  Check(bl.ops.encryptions == 10 && bl.ops.decryptions == 2,
        "block operation counts");
  return "pointwise and block";
}

const std::vector<std::pair<std::string, std::function<std::string()>>>&
Suites() {
  static const auto* suites =
      new std::vector<std::pair<std::string, std::function<std::string()>>>{
          {"paillier-exhaustive-35", PaillierExhaustive35},
          {"pack-sum-homomorphism", PackSumHomomorphism},
          {"signature-small-key", SignatureSmallKey},
          {"clearing-examples", ClearingExamples},
          {"auction-equivalence", AuctionEquivalence},
      };
  return *suites;
}

}  // namespace

std::vector<std::string> SuiteNames() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : Suites()) out.push_back(name);
  return out;
}

std::vector<SuiteResult> RunAll() {
  std::vector<SuiteResult> out;
  for (const auto& [name, fn] : Suites()) {
    SuiteResult r{name, false, ""};
    try {
      r.detail = fn();
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ptes::selftest
