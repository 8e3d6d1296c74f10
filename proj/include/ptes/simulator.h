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

// In-memory links with a scripted adversary, and the multi-cycle scenario
// runner that turns protocol results into detection statistics, transcripts
// and per-role timings.

#ifndef PTES_SIMULATOR_H_
#define PTES_SIMULATOR_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ptes/market.h"
#include "ptes/paillier.h"
#include "ptes/protocol.h"
#include "ptes/rng.h"
#include "ptes/serialize.h"

namespace ptes::simulator {

enum class AttackKind { kNone, kTamper, kReplay, kReorder, kForge, kDrop };

std::string_view Name(AttackKind kind);
AttackKind ParseAttackKind(std::string_view name);  // kConfigError

// Where replayed triples come from. Same-cycle history only is the default;
// any_cycle also draws on the previous cycle's traffic.
enum class ReplayScope { kSameCycle, kAnyCycle };

struct AttackRule {
  std::uint64_t first_cycle = 1;
  std::uint64_t last_cycle = std::numeric_limits<std::uint64_t>::max();
  std::vector<protocol::LinkGroup> groups;  // empty: every group
  std::vector<AttackKind> kinds = {AttackKind::kTamper};  // one drawn per hit
  double fraction = 0.5;  // chance that a matching message is attacked
  std::optional<std::size_t> agent;  // only links touching this agent
};

struct AttackScenario {
  std::vector<AttackRule> rules;
  std::uint64_t seed = 1;
  ReplayScope replay_scope = ReplayScope::kSameCycle;
};

// "none", "half-cycle-<n>" (tamper half of every link's messages in cycle n)
// and "mixed-cycle-<n>" (same, drawing tamper/replay/reorder/forge).
// Throws kConfigError for anything else.
AttackScenario AttackPreset(std::string_view name);
AttackScenario AttackScenarioFromJson(const io::Json& j);
io::Json ToJson(const AttackScenario& scenario);

struct TranscriptEntry {
  std::uint64_t cycle = 0;
  protocol::Envelope sent;
  std::optional<protocol::Envelope> delivered;
  AttackKind attack = AttackKind::kNone;
};

// Public keys the adversary may use; no private material.
struct PublicDirectory {
  paillier::PublicKey coordinator;
  std::map<std::string, unsigned long> signer_bits;
  unsigned long price_width = 1;

  static PublicDirectory From(const protocol::AuctionSession& session);
};

// Channel set for one scenario: applies the attack schedule to each batch
// and records every message before and after the adversary touched it.
class AdversarialTransport : public protocol::Transport {
 public:
  AdversarialTransport(AttackScenario scenario, PublicDirectory directory);

  std::vector<std::optional<protocol::Envelope>> Deliver(
      std::uint64_t cycle, std::vector<protocol::Envelope> batch) override;

  // Attack applied to the slot carrying message_id in `cycle`.
  AttackKind AttackOn(std::uint64_t cycle, std::uint64_t message_id) const;
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  const std::vector<std::string>& skipped() const { return skipped_; }
  void set_keep_transcript(bool keep) { keep_transcript_ = keep; }

 private:
  AttackKind Choose(std::uint64_t cycle, const protocol::Envelope& e, Rng& rng);
  BigNat RandomMessage(const protocol::Envelope& e, Rng& rng) const;
  const paillier::KeySet& TamperKey(std::uint64_t cycle, unsigned long bits,
                                    Rng& rng);
  const paillier::KeySet& ForgeKey(unsigned long bits);
  void Resign(protocol::Envelope& e, const BigNat& message,
              const paillier::KeySet& keys);

  AttackScenario scenario_;
  PublicDirectory directory_;
  bool keep_transcript_ = true;
  std::map<std::pair<std::uint64_t, std::uint64_t>, AttackKind> attacks_;
  // Pre-attack traffic per (cycle, group), for replays.
  std::map<std::pair<std::uint64_t, int>, std::vector<protocol::Envelope>>
      observed_;
  std::map<std::pair<std::uint64_t, unsigned long>, paillier::KeySet>
      tamper_keys_;
  std::map<unsigned long, paillier::KeySet> forge_keys_;
  std::vector<TranscriptEntry> transcript_;
  std::vector<std::string> skipped_;
};

struct ScenarioConfig {
  protocol::ProtocolConfig protocol;
  market::PopulationParams supply;  // kind, n_agents and seed are overridden
  market::PopulationParams demand;
  std::size_t cycles = 10;
  std::size_t cycles_per_day = 288;
  // Share of agents active in a cycle: mean + amplitude * sin(day phase).
  double activity_mean = 0.8;
  double activity_amplitude = 0.15;
  // Capacity clearing: the base price swings between these over the day.
  double base_price_low = 0.2;
  double base_price_high = 0.4;

  // Desk-scale defaults: 100 customers under a feeder limit, packed
  // ciphertexts split to fit 1024-bit keys, signed links.
  static ScenarioConfig Default();
};

ScenarioConfig ScenarioConfigFromJson(const io::Json& j);
io::Json ToJson(const ScenarioConfig& config);

// The curves and base price all agents report in `cycle`.
protocol::CycleInputs CycleInputsFor(const ScenarioConfig& config,
                                     std::uint64_t cycle);

struct MessageRecord {
  std::uint64_t cycle = 0;
  std::uint64_t message_id = 0;
  protocol::LinkGroup group = protocol::LinkGroup::kAgentToTp;
  std::string link;
  std::uint64_t index = 0;
  AttackKind attack = AttackKind::kNone;
  bool flag = true;
};

struct DetectionStats {
  std::size_t attacked = 0;
  std::size_t attacked_flagged = 0;
  std::size_t clean = 0;
  std::size_t clean_flagged = 0;

  // nullopt when the denominator is zero.
  std::optional<double> detection_rate() const;
  std::optional<double> false_alarm_rate() const;
};

struct CycleSummary {
  protocol::ClearingResult result;
  std::size_t baseline_index = 0;  // clearing on the true curves, in the clear
  BigNat baseline_price_units;
  bool matches_baseline = false;
};

struct ScenarioReport {
  unsigned long key_bits = 0;
  std::string mode;
  bool signing_enabled = false;
  std::size_t n_agents = 0;
  std::vector<CycleSummary> cycles;
  std::vector<MessageRecord> messages;
  DetectionStats detection;
  std::map<protocol::LinkGroup, DetectionStats> detection_by_group;
  std::vector<std::string> skipped_attacks;
  std::size_t failed_cycles = 0;
  std::vector<TranscriptEntry> transcript;
  // Seconds summed over all cycles, per (role, phase).
  std::map<std::pair<std::string, std::string>, double> timing;
};

struct RunOptions {
  bool keep_transcript = false;
  // Reuse existing keys instead of generating them from the config seed.
  const protocol::Parties* parties = nullptr;
};

ScenarioReport RunScenario(const ScenarioConfig& config,
                           const AttackScenario& attacks,
                           const RunOptions& options = {});

io::Json ToJson(const ScenarioReport& report, bool include_timing = true);
void WriteTranscript(const ScenarioReport& report, std::ostream& out);

struct BenchRecord {
  unsigned long key_bits = 0;
  std::string mode;
  std::string role;
  double seconds_per_cycle = 0;  // agent: per agent per cycle
};

// Data-plane cost per role: agent encrypt + sign, TP verify + aggregate +
// sign, CO verify + decrypt + clear. The price broadcast is left out.
std::vector<BenchRecord> RoleTimes(const ScenarioReport& report);

inline constexpr std::string_view kBenchCsvHeader =
    "key_bits,mode,role,seconds_per_cycle";
void WriteBenchCsv(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace ptes::simulator

#endif  // PTES_SIMULATOR_H_
