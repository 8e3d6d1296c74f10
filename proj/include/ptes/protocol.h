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

// The three-party encrypted auction: agents encrypt their curves under the
// coordinator's key, the third party multiplies ciphertexts, the coordinator
// decrypts the aggregates, clears, and broadcasts the price. Every link can
// be wrapped in index-stamped signatures, and flagged inputs are replaced
// according to a mitigation policy.

#ifndef PTES_PROTOCOL_H_
#define PTES_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptes/market.h"
#include "ptes/numtheory.h"
#include "ptes/packing.h"
#include "ptes/paillier.h"
#include "ptes/signature.h"

namespace ptes::protocol {

enum class MitigationPolicy { kLastGood, kDropAgent, kHistorical };
enum class ClearingRule { kTwoSided, kCapacity };
enum class LinkGroup { kAgentToTp, kTpToCo, kCoToAgent };

std::string_view Name(MitigationPolicy policy);
std::string_view Name(ClearingRule rule);
std::string_view Name(LinkGroup group);
// Throw kConfigError on unknown names.
MitigationPolicy ParseMitigationPolicy(std::string_view name);
ClearingRule ParseClearingRule(std::string_view name);
LinkGroup ParseLinkGroup(std::string_view name);

struct ProtocolConfig {
  market::PriceGrid grid;
  std::size_t n_suppliers = 4;
  std::size_t n_customers = 100;
  double delta_s = 6.0;
  double delta_d = 6.0;
  unsigned long key_bits = 1024;
  bool block_mode = false;
  // Block mode only: split the grid over several ciphertexts per agent when
  // one packed plaintext would not fit under the key.
  bool allow_block_split = false;
  bool signing_enabled = true;
  MitigationPolicy mitigation = MitigationPolicy::kLastGood;
  std::size_t price_history = 3;  // k for the historical price mean
  ClearingRule clearing = ClearingRule::kTwoSided;
  double capacity = 400.0;  // feeder limit, capacity clearing only
  std::uint64_t seed = 1;

  std::size_t n_agents() const { return n_suppliers + n_customers; }
};

// Strict bound on any column sum of one side: n * ceil(10^sigma * delta).
BigNat ColumnBound(std::size_t n_agents, double delta, int sigma);

// How each side's curve is cut into plaintexts. Pointwise mode is one slot
// per block; block mode packs as many slots per block as the key allows.
struct BlockLayout {
  std::size_t slots_per_block = 1;
  std::size_t n_blocks = 1;
  std::size_t supply_width = 1;  // decimal digits per slot
  std::size_t demand_width = 1;
  BigNat alpha_bound;  // the coordinator's alpha must exceed this

  // Grid points [first, first + count) carried by block b (1-based).
  std::pair<std::size_t, std::size_t> Slots(std::size_t block,
                                            std::size_t n_points) const;
};

// Throws kBoundViolation when the required bound does not fit strictly
// below 2^(key_bits - 1), kConfigError for inconsistent populations.
BlockLayout PlanBlocks(const ProtocolConfig& config);

// Index plan. Agents send block b under index b, the third party sends the
// supply aggregate of block b under 2(b-1)+1 and the demand aggregate under
// 2(b-1)+2, and the coordinator sends agent i its price under index i.
inline std::uint64_t AgentIndex(std::size_t block) { return block; }
inline std::uint64_t TpIndex(std::size_t block, market::CurveKind side) {
  return 2 * (block - 1) + (side == market::CurveKind::kSupply ? 1 : 2);
}
inline std::uint64_t PriceIndex(std::size_t agent) { return agent; }

// Key material for one market. Signing keys are 64 bits longer than the
// coordinator key so that a signed ciphertext still fits below alpha^2.
struct Parties {
  paillier::KeySet coordinator;  // encryption and price signing
  std::optional<paillier::KeySet> third_party;
  std::vector<paillier::KeySet> agents;  // agent i at position i - 1
};

inline constexpr unsigned long kSigningKeyMargin = 64;

Parties MakeParties(const ProtocolConfig& config, const BlockLayout& layout);

// One message in flight. `triple.z` carries the bare message when the link
// is unauthenticated.
struct Envelope {
  std::uint64_t message_id = 0;  // position in the cycle's send order
  LinkGroup group = LinkGroup::kAgentToTp;
  std::size_t agent = 0;  // agent end of the link; 0 for TP -> CO
  std::uint64_t index = 0;
  std::size_t width = 0;  // message digits after the index prefix
  bool authenticated = false;
  signature::SignedTriple triple;

  std::string Link() const;
};

// Moves one link group's batch of the cycle. Slot k of the result is what
// the receiver of batch[k] actually gets; nullopt when nothing arrives.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::vector<std::optional<Envelope>> Deliver(
      std::uint64_t cycle, std::vector<Envelope> batch) = 0;
};

class DirectTransport : public Transport {
 public:
  std::vector<std::optional<Envelope>> Deliver(
      std::uint64_t, std::vector<Envelope> batch) override;
};

// Stand-in for asking a party for its true data over some other medium.
// The default reaches no one.
class AlternativeChannel {
 public:
  virtual ~AlternativeChannel() = default;
  virtual std::optional<paillier::Ciphertext> RecoverCiphertext(
      std::uint64_t /*cycle*/, std::size_t /*agent*/, std::size_t /*block*/) {
    return std::nullopt;
  }
};

struct CycleInputs {
  std::vector<market::SampledCurve> supply;  // agents 1..N_s
  std::vector<market::SampledCurve> demand;  // agents N_s+1..N_s+N_d
  std::size_t base_price_index = 1;          // capacity clearing only
};

struct LinkFlag {
  std::uint64_t message_id = 0;
  LinkGroup group = LinkGroup::kAgentToTp;
  std::string link;
  std::uint64_t index = 0;
  bool flag = true;
  std::string reason;  // "signature" or "missing" when flag is false
};

struct MitigationAction {
  LinkGroup group = LinkGroup::kAgentToTp;
  std::string link;
  std::string action;
  std::string detail;
};

struct OpCounters {
  std::size_t encryptions = 0;
  std::size_t aggregations = 0;
  std::size_t decryptions = 0;
  std::size_t signatures = 0;
  std::size_t verifications = 0;

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

struct TimingRecord {
  std::string role;  // agent, tp, co
  std::string phase;
  double seconds = 0;
};

struct ClearingResult {
  std::uint64_t cycle = 0;
  market::ClearingPoint clearing;
  BigNat price_units;  // 10^sigma_lambda * lambda_star
  market::SampledCurve supply;  // aggregates, scaled by 10^sigma
  market::SampledCurve demand;
  std::vector<LinkFlag> flags;
  std::vector<MitigationAction> mitigations;
  std::vector<std::size_t> dropped_agents;
  std::vector<std::optional<BigNat>> agent_prices;  // what each agent adopted
  bool failed = false;
  std::vector<std::string> failures;
  OpCounters ops;
  std::vector<TimingRecord> timing;
};

// The same clearing computed in the clear; the oracle for the encrypted run.
// Agents listed in `exclude` (1-based) are left out.
ClearingResult ClearPlaintext(const ProtocolConfig& config,
                              const CycleInputs& inputs,
                              const std::vector<std::size_t>& exclude = {});

// Runs cycles against one set of keys; keeps the authenticated history that
// mitigation draws on.
class AuctionSession {
 public:
  // Throws kBoundViolation (see PlanBlocks) and kConfigError.
  AuctionSession(ProtocolConfig config, Parties parties);
  explicit AuctionSession(ProtocolConfig config);

  // Throws kGridMismatch / kConfigError for inputs not matching the config.
  // Missing history for a mitigation is not thrown; it marks the cycle failed.
  ClearingResult RunCycle(std::uint64_t cycle, const CycleInputs& inputs,
                          Transport& transport);

  void set_alternative_channel(std::shared_ptr<AlternativeChannel> channel) {
    alternative_ = std::move(channel);
  }

  const ProtocolConfig& config() const { return config_; }
  const BlockLayout& layout() const { return layout_; }
  const Parties& parties() const { return parties_; }
  // Digits of an index-stamped ciphertext / price message.
  std::size_t ciphertext_width() const { return ciphertext_width_; }
  std::size_t price_width() const { return price_width_; }

 private:
  struct History {
    std::map<std::pair<std::size_t, std::size_t>, paillier::Ciphertext>
        ciphertexts;  // (agent, block)
    std::map<std::pair<int, std::size_t>, std::vector<BigNat>>
        aggregates;  // (side, block)
    std::map<std::size_t, std::deque<BigNat>> prices;  // per agent
  };

  ProtocolConfig config_;
  BlockLayout layout_;
  Parties parties_;
  std::size_t ciphertext_width_ = 0;
  std::size_t price_width_ = 0;
  History history_;
  std::shared_ptr<AlternativeChannel> alternative_;
};

// Both entry points run a single cycle on fresh keys with the requested mode.
ClearingResult RunAuctionPointwise(ProtocolConfig config,
                                   const CycleInputs& inputs,
                                   Transport& transport);
ClearingResult RunAuctionBlock(ProtocolConfig config, const CycleInputs& inputs,
                               Transport& transport);

}  // namespace ptes::protocol

#endif  // PTES_PROTOCOL_H_
