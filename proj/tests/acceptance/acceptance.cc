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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Pass criterion numbers to run a subset.

#include <gmp.h>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ptes/bench.h"
#include "ptes/error.h"
#include "ptes/market.h"
#include "ptes/numtheory.h"
#include "ptes/packing.h"
#include "ptes/paillier.h"
#include "ptes/paillier_testing.h"
#include "ptes/protocol.h"
#include "ptes/rng.h"
#include "ptes/signature.h"
#include "ptes/simulator.h"

namespace ptes {
namespace {

using protocol::ClearingResult;
using protocol::LinkGroup;
using simulator::AttackKind;

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Collects the first few mismatches; any mismatch fails the criterion.
class Tally {
 public:
  void Check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) std::cerr << "  mismatch: " << what << "\n";
  }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
};

void Progress(const std::string& s) { std::cerr << "  " << s << std::endl; }

BigNat PowMod(const BigNat& b, const BigNat& e, const BigNat& m) {
  BigNat r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Textbook Paillier with lambda = lcm(p-1, q-1), no CRT.
struct ReferencePaillier {
  BigNat n, n2, g, lambda, mu;

  ReferencePaillier(const BigNat& p, const BigNat& q, const BigNat& g_in)
      : n(p * q), n2(n * n), g(g_in) {
    const BigNat a = p - 1, b = q - 1;
    mpz_lcm(lambda.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const BigNat l = (PowMod(g, lambda, n2) - 1) / n;
    mpz_invert(mu.get_mpz_t(), l.get_mpz_t(), n.get_mpz_t());
  }
  BigNat Encrypt(const BigNat& m, const BigNat& r) const {
    return PowMod(g, m, n2) * PowMod(r, n, n2) % n2;
  }
  BigNat Decrypt(const BigNat& c) const {
    return (PowMod(c, lambda, n2) - 1) / n * mu % n;
  }
};

ReferencePaillier ReferenceFor(const paillier::KeySet& k) {
  return ReferencePaillier(k.p(), k.q(), k.beta());
}

// Two-sided market with 4 suppliers and 96 customers on the 101-point grid.
simulator::ScenarioConfig MarketScenario(std::uint64_t seed) {
  simulator::ScenarioConfig c;
  protocol::ProtocolConfig& p = c.protocol;
  p.n_suppliers = 4;
  p.n_customers = 96;
  p.delta_s = 64;
  p.delta_d = 6;
  p.key_bits = 1024;
  p.block_mode = false;
  p.allow_block_split = false;
  p.signing_enabled = false;
  p.clearing = protocol::ClearingRule::kTwoSided;
  p.seed = seed;
  c.supply.power_lo = 20;
  c.supply.power_hi = 60;
  return c;
}

BigNat Sum(const std::vector<market::SampledCurve>& curves, std::size_t l) {
  BigNat s = 0;
  for (const auto& c : curves) s += c.values[l];
  return s;
}

bool SameResult(const ClearingResult& a, const ClearingResult& b) {
  return a.supply == b.supply && a.demand == b.demand &&
         a.clearing.index == b.clearing.index &&
         a.clearing.lambda_star == b.clearing.lambda_star &&
         a.clearing.exact == b.clearing.exact &&
         a.price_units == b.price_units && a.agent_prices == b.agent_prices &&
         a.failed == b.failed;
}

constexpr std::size_t kScenarios = 50;

// Criteria 1 and 2 share the encrypted pointwise runs.
struct EquivalenceRuns {
  Outcome clearing;
  Outcome block;
};

EquivalenceRuns RunEquivalence() {
  simulator::ScenarioConfig pw_cfg = MarketScenario(1);
  simulator::ScenarioConfig bl_cfg = pw_cfg;
  // 100 agents over 101 prices need a 1677-bit plaintext bound.
  bl_cfg.protocol.block_mode = true;
  bl_cfg.protocol.key_bits = 2048;
  const protocol::BlockLayout bl_layout = protocol::PlanBlocks(bl_cfg.protocol);
  const protocol::Parties pw_parties =
      protocol::MakeParties(pw_cfg.protocol, protocol::PlanBlocks(pw_cfg.protocol));
  const protocol::Parties bl_parties = protocol::MakeParties(bl_cfg.protocol, bl_layout);

  Tally clear, block;
  std::size_t exact = 0, interior = 0;
  const std::size_t n_agents = pw_cfg.protocol.n_agents();
  const std::size_t n_points = pw_cfg.protocol.grid.n_points();
  block.Check(bl_layout.n_blocks == 1, "block layout splits");
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t s = 1; s <= kScenarios; ++s) {
    pw_cfg.protocol.seed = bl_cfg.protocol.seed = 1000 + s;
    const protocol::CycleInputs in = simulator::CycleInputsFor(pw_cfg, 1);
    protocol::DirectTransport direct;
    const ClearingResult pw =
        protocol::AuctionSession(pw_cfg.protocol, pw_parties).RunCycle(1, in, direct);
    const ClearingResult bl =
        protocol::AuctionSession(bl_cfg.protocol, bl_parties).RunCycle(1, in, direct);

    const std::string tag = "scenario " + std::to_string(s);
    market::SampledCurve supply{market::CurveKind::kSupply, {}, "supply"};
    market::SampledCurve demand{market::CurveKind::kDemand, {}, "demand"};
    for (std::size_t l = 0; l < n_points; ++l) {
      supply.values.push_back(Sum(in.supply, l));
      demand.values.push_back(Sum(in.demand, l));
    }
    const market::ClearingPoint want =
        market::ClearTwoSided(supply, demand, pw_cfg.protocol.grid);
    clear.Check(!pw.failed, tag + " failed");
    clear.Check(pw.demand.values == demand.values, tag + " demand aggregate");
    clear.Check(pw.supply.values == supply.values, tag + " supply aggregate");
    clear.Check(pw.clearing.index == want.index, tag + " clearing index");
    clear.Check(pw.clearing.lambda_star == want.lambda_star, tag + " lambda*");
    clear.Check(pw.price_units == pw_cfg.protocol.grid.PriceUnits(want.index),
                tag + " price units");
    exact += want.exact;
    interior += want.index > 1 && want.index < n_points;

    block.Check(SameResult(pw, bl), tag + " block differs from pointwise");
    block.Check(bl.ops.encryptions == n_agents, tag + " block encryptions");
    block.Check(bl.ops.aggregations == 2, tag + " block aggregations");
    block.Check(bl.ops.decryptions == 2, tag + " block decryptions");
    block.Check(pw.ops.encryptions == n_agents * n_points,
                tag + " pointwise encryptions");
    if (s % 10 == 0) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      Progress(std::to_string(s) + "/" + std::to_string(kScenarios) +
               " scenarios, " + std::to_string(static_cast<int>(secs)) + " s");
    }
  }
  EquivalenceRuns out;
  out.clearing.passed = clear.failures() == 0;
  out.clearing.detail = std::to_string(kScenarios) + " scenarios, " +
                        std::to_string(clear.checks()) + " checks, " +
                        std::to_string(clear.failures()) + " mismatches (" +
                        std::to_string(interior) + " interior prices, " +
                        std::to_string(exact) + " exact intersections)";
  out.block.passed = block.failures() == 0;
  out.block.detail = std::to_string(kScenarios) + " scenarios, " +
                     std::to_string(block.checks()) + " checks, " +
                     std::to_string(block.failures()) +
                     " mismatches (block keys " +
                     std::to_string(bl_cfg.protocol.key_bits) + " bits)";
  return out;
}

Outcome AttackDetection() {
  simulator::ScenarioConfig c = MarketScenario(77);
  c.protocol.key_bits = 512;
  c.protocol.signing_enabled = true;
  c.protocol.mitigation = protocol::MitigationPolicy::kLastGood;
  c.cycles = 3;
  simulator::AttackScenario attacks;
  attacks.seed = 78;
  simulator::AttackRule rule;
  rule.first_cycle = 2;
  rule.last_cycle = 3;
  rule.kinds = {AttackKind::kTamper, AttackKind::kReplay, AttackKind::kReorder,
                AttackKind::kForge};
  rule.fraction = 0.5;
  attacks.rules.push_back(rule);
  const simulator::ScenarioReport report = simulator::RunScenario(c, attacks);

  std::map<std::pair<LinkGroup, AttackKind>, std::size_t> attacked;
  std::size_t n_attacked = 0, missed = 0, n_clean = 0, false_alarms = 0;
  for (const simulator::MessageRecord& m : report.messages) {
    if (m.attack == AttackKind::kNone) {
      ++n_clean;
      false_alarms += !m.flag;
    } else {
      ++n_attacked;
      missed += m.flag;
      ++attacked[{m.group, m.attack}];
    }
  }
  Outcome out;
  std::ostringstream d;
  d << n_attacked << " attacked, " << missed << " accepted; " << n_clean
    << " clean, " << false_alarms << " flagged; per link group:";
  for (LinkGroup g : {LinkGroup::kAgentToTp, LinkGroup::kTpToCo,
                      LinkGroup::kCoToAgent}) {
    d << " " << protocol::Name(g) << "=";
    bool first = true;
    for (AttackKind k : {AttackKind::kTamper, AttackKind::kReplay,
                         AttackKind::kReorder, AttackKind::kForge}) {
      const std::size_t n = attacked[{g, k}];
      if (n == 0) out.passed = false;
      d << (first ? "" : "/") << n;
      first = false;
    }
  }
  out.passed = out.passed && n_attacked >= 2000 && n_clean >= 2000 &&
               missed == 0 && false_alarms == 0 &&
               report.detection.attacked == n_attacked;
  out.detail = d.str();
  return out;
}

void PaillierTrial(const paillier::KeySet& keys, Rng& rng, Tally& t) {
  const paillier::PublicKey& pk = keys.public_key();
  const ReferencePaillier ref = ReferenceFor(keys);
  const BigNat m1 = rng.Below(pk.alpha), m2 = rng.Below(pk.alpha);
  const BigNat r1 = numtheory::SampleCoprime(pk.alpha, rng);
  const BigNat r2 = numtheory::SampleCoprime(pk.alpha, rng);
  const paillier::Ciphertext c1 = paillier::testing::EncryptWithNonce(pk, m1, r1);
  const paillier::Ciphertext c2 = paillier::testing::EncryptWithNonce(pk, m2, r2);
  t.Check(c1.value == ref.Encrypt(m1, r1), "encryption formula");
  t.Check(paillier::Decrypt(keys, c1) == m1, "roundtrip");
  t.Check(paillier::Decrypt(keys, paillier::Encrypt(pk, m2, rng)) == m2,
          "roundtrip, library nonce");
  const paillier::Ciphertext both[] = {c1, c2};
  const paillier::Ciphertext sum = paillier::AddCiphertexts(pk, both);
  const BigNat want = (m1 + m2) % pk.alpha;
  t.Check(sum.value == c1.value * c2.value % pk.alpha_squared, "aggregation");
  t.Check(paillier::Decrypt(keys, sum) == want, "homomorphic sum");
  t.Check(ref.Decrypt(sum.value) == want, "reference decryption");
}

Outcome PaillierCorrectness() {
  Tally t;
  // The (5, 7) key with the simple generator and with every other admissible
  // generator below 100.
  std::vector<paillier::KeySet> small;
  for (unsigned g = 2; g < 100; ++g) {
    try {
      small.push_back(paillier::KeySet::FromComponents("k35", 5, 7, g));
    } catch (const Error&) {
    }
  }
  for (const paillier::KeySet& keys : small) {
    const paillier::PublicKey& pk = keys.public_key();
    const ReferencePaillier ref = ReferenceFor(keys);
    std::vector<paillier::Ciphertext> one_per_m;
    for (unsigned m = 0; m < 35; ++m) {
      for (unsigned r = 1; r < 35; ++r) {
        if (std::gcd(r, 35u) != 1) continue;
        const auto c = paillier::testing::EncryptWithNonce(pk, m, r);
        t.Check(c.value == ref.Encrypt(m, r), "small encryption formula");
        t.Check(paillier::Decrypt(keys, c) == m, "small roundtrip");
        if (r == 1 + m % 3) one_per_m.push_back(c);
      }
    }
    for (unsigned a = 0; a < 35; ++a) {
      for (unsigned b = 0; b < 35; ++b) {
        const paillier::Ciphertext pair[] = {one_per_m[a], one_per_m[b]};
        const paillier::Ciphertext s = paillier::AddCiphertexts(pk, pair);
        t.Check(paillier::Decrypt(keys, s) == (a + b) % 35, "small homomorphism");
        t.Check(ref.Decrypt(s.value) == (a + b) % 35, "small reference sum");
      }
    }
  }
  const std::size_t small_checks = t.checks();
  Rng rng(4);
  for (unsigned long bits : {512ul, 1024ul, 2048ul}) {
    const paillier::KeySet simple = paillier::Keygen(bits, 1, rng);
    const paillier::KeySet random_g = paillier::Keygen(
        bits, 1, rng, {.key_id = "rg", .generator = paillier::GeneratorChoice::kRandom});
    for (int i = 0; i < 1000; ++i) PaillierTrial(i % 2 ? random_g : simple, rng, t);
    Progress("paillier " + std::to_string(bits) + " bits done");
  }
  return {t.failures() == 0,
          std::to_string(small.size()) + " generators for (5,7) with " +
              std::to_string(small_checks) + " checks, 1000 trials at each of "
              "512/1024/2048 bits; " +
              std::to_string(t.failures()) + " failures"};
}

bool ReferenceEquation(const paillier::PublicKey& pk,
                       const signature::SignedTriple& t) {
  return PowMod(pk.beta, t.s1, pk.alpha_squared) * PowMod(t.s2, pk.alpha, pk.alpha_squared) %
             pk.alpha_squared == t.z;
}

Outcome SignatureEquation() {
  Tally t;
  std::size_t sends = 0, corruptions = 0;
  Rng rng(5);
  for (unsigned long bits : {512ul, 1024ul, 2048ul}) {
    const paillier::KeySet keys = paillier::Keygen(bits, 1, rng, {.key_id = "signer"});
    const paillier::KeySet other = paillier::Keygen(bits, 1, rng, {.key_id = "other"});
    const paillier::PublicKey& pk = keys.public_key();
    // The widest message that still leaves room for a 4-digit index.
    const std::size_t width = packing::NumDigits(pk.alpha_squared) - 5;
    const BigNat message_bound = packing::Pow10(width);
    std::vector<std::pair<signature::SignedTriple, std::uint64_t>> sent;
    for (int i = 0; i < 200; ++i) {
      const BigNat m = rng.Below(message_bound);
      const std::uint64_t index = rng.UniformInt(1, 9999);
      signature::SignedTriple tr;
      try {
        tr = signature::AuthSend(keys, m, index, width);
      } catch (const Error& e) {
        // gcd(z, alpha) != 1 happens with negligible probability.
        t.Check(e.code() == ErrorCode::kUnsignableMessage, e.what());
        continue;
      }
      ++sends;
      t.Check(ReferenceEquation(pk, tr), "signature equation");
      const signature::VerifyOutcome v = signature::AuthReceive(pk, tr, index, width);
      t.Check(v.flag && v.message == m, "authentic send rejected");
      sent.emplace_back(tr, index);
    }
    for (int i = 0; i < 500; ++i) {
      auto [tr, index] = sent[i % sent.size()];
      std::uint64_t expect = index;
      const BigNat delta = 1 + rng.Below(pk.alpha - 1);
      switch (rng.UniformInt(0, 5)) {
        case 0: tr.z = (tr.z + delta) % pk.alpha_squared; break;
        case 1: tr.s1 = (tr.s1 + delta) % pk.alpha; break;
        case 2: tr.s2 = (tr.s2 + delta) % pk.alpha; break;
        case 3: expect = index + (index > 1 && rng.Bernoulli(0.5) ? -1 : 1); break;
        case 4: tr = signature::AuthSend(other, rng.Below(message_bound), index, width); break;
        case 5: {
          // A replay only counts under a different index.
          const auto& [other_tr, other_index] = sent[(i + 1) % sent.size()];
          if (other_index == index) continue;
          tr = other_tr;
          break;
        }
      }
      if (tr == sent[i % sent.size()].first && expect == index) continue;
      ++corruptions;
      t.Check(!signature::AuthReceive(pk, tr, expect, width).flag,
              "corruption accepted");
    }
  }
  return {t.failures() == 0 && corruptions >= 1500,
          std::to_string(sends) + " authentic sends, " +
              std::to_string(corruptions) + " corruptions over 512/1024/2048 bits; " +
              std::to_string(t.failures()) + " failures"};
}

Outcome EfficiencyTrend() {
  bench::BenchOptions o;
  o.bits = {512, 2048};
  o.agents = 100;
  o.points = 101;
  const auto ratios = bench::Ratios(bench::RunBench(o, Progress));
  Outcome out;
  std::ostringstream d;
  d << "pointwise/block:";
  std::set<std::string> checked;
  for (const bench::RoleRatio& r : ratios) {
    d << " " << r.role << "@" << r.key_bits << "=" << r.pointwise_over_block;
    if (r.key_bits == 2048 && (r.role == "agent" || r.role == "CO")) {
      checked.insert(r.role);
      if (r.pointwise_over_block < 50) out.passed = false;
    }
  }
  if (checked.size() != 2) out.passed = false;
  d << " (need >= 50 for agent and CO at 2048)";
  out.detail = d.str();
  return out;
}

// Packing by decimal string concatenation, independent of the library.
BigNat StringPack(const std::vector<BigNat>& values, std::size_t width) {
  std::string s;
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    std::string v = ToDecimal(*it);
    s += std::string(width - v.size(), '0') + v;
  }
  return BigNatFromString(s);
}

Outcome PackingOracle() {
  Tally t;
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const packing::PackSpec spec{static_cast<std::size_t>(rng.UniformInt(1, 6)),
                                 static_cast<std::size_t>(rng.UniformInt(1, 40))};
    const std::size_t members = rng.UniformInt(1, spec.width == 1 ? 10 : 12);
    const BigNat slot_bound = packing::Pow10(spec.width);
    // Per-member cap keeps every column sum below 10^width.
    const BigNat cap = slot_bound / members;
    std::vector<BigNat> column(spec.count, 0);
    BigNat packed_sum = 0;
    for (std::size_t k = 0; k < members; ++k) {
      std::vector<BigNat> v(spec.count);
      for (std::size_t l = 0; l < spec.count; ++l) {
        v[l] = rng.Below(cap);
        column[l] += v[l];
      }
      const BigNat packed = packing::Pack(v, spec);
      t.Check(packed == StringPack(v, spec.width), "pack layout");
      t.Check(packing::Unpack(packed, spec) == v, "unpack");
      packed_sum += packed;
    }
    t.Check(packed_sum == packing::Pack(column, spec), "pack of sums");
    t.Check(packing::Unpack(packed_sum, spec) == column, "cut of sum");
  }
  // Two slots of three digits: 017|009 and 015|024.
  const packing::PackSpec spec{3, 2};
  const BigNat a = packing::Pack(std::vector<BigNat>{9, 17}, spec);
  const BigNat b = packing::Pack(std::vector<BigNat>{24, 15}, spec);
  t.Check(a == 17009 && b == 15024, "worked example packing");
  t.Check(a + b == 32033, "worked example sum");
  t.Check(packing::Unpack(a + b, spec) == std::vector<BigNat>{33, 32},
          "worked example cuts");
  t.Check(packing::SliceDigits(a + b, 4, 6, 6) == 33 &&
              packing::SliceDigits(a + b, 1, 3, 6) == 32,
          "worked example slices");
  Rng krng(8);
  const paillier::KeySet keys = paillier::Keygen(256, 1, krng);
  const paillier::Ciphertext cts[] = {paillier::Encrypt(keys.public_key(), a, krng),
                                      paillier::Encrypt(keys.public_key(), b, krng)};
  t.Check(packing::Unpack(paillier::Decrypt(
                              keys, paillier::AddCiphertexts(keys.public_key(), cts)),
                          spec) == std::vector<BigNat>{33, 32},
          "worked example under encryption");
  return {t.failures() == 0, std::to_string(t.checks()) + " checks, " +
                                 std::to_string(t.failures()) + " failures"};
}

void Report(int n, const std::string& name, const Outcome& o, bool& all) {
  std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << n << " " << name
            << ": " << o.detail << std::endl;
  all = all && o.passed;
}

Outcome Guard(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace
}  // namespace ptes

int main(int argc, char** argv) {
  using namespace ptes;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return only.empty() || only.contains(n); };

  bool all = true;
  if (wanted(1) || wanted(2)) {
    EquivalenceRuns eq;
    const Outcome o = Guard([&] {
      eq = RunEquivalence();
      return Outcome{};
    });
    if (!o.passed) eq.clearing = eq.block = o;
    if (wanted(1)) Report(1, "clearing-equivalence", eq.clearing, all);
    if (wanted(2)) Report(2, "block-equivalence", eq.block, all);
  }
  if (wanted(3)) Report(3, "attack-detection", Guard(AttackDetection), all);
  if (wanted(4)) Report(4, "paillier-correctness", Guard(PaillierCorrectness), all);
  if (wanted(5)) Report(5, "signature-equation", Guard(SignatureEquation), all);
  if (wanted(6)) Report(6, "efficiency-trend", Guard(EfficiencyTrend), all);
  if (wanted(7)) Report(7, "packing-oracle", Guard(PackingOracle), all);
  return all ? 0 : 1;
}
