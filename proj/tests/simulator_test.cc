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

#include "ptes/simulator.h"

#include <gtest/gtest.h>

#include <functional>
#include <sstream>

#include "ptes/error.h"

namespace ptes::simulator {
namespace {

using protocol::LinkGroup;

ScenarioConfig Small(bool block = false) {
  ScenarioConfig c;
  c.protocol.n_suppliers = 3;
  c.protocol.n_customers = 12;
  c.protocol.delta_s = 13.0;
  c.protocol.key_bits = block ? 1400 : 256;
  c.protocol.block_mode = block;
  c.protocol.signing_enabled = true;
  c.supply.power_lo = 8.0;
  c.supply.power_hi = 12.0;
  c.cycles = 3;
  return c;
}

AttackScenario Rule(std::uint64_t first, std::uint64_t last,
                    std::vector<AttackKind> kinds, double fraction,
                    std::vector<LinkGroup> groups = {}) {
  AttackRule r;
  r.first_cycle = first;
  r.last_cycle = last;
  r.kinds = std::move(kinds);
  r.fraction = fraction;
  r.groups = std::move(groups);
  AttackScenario s;
  s.rules.push_back(r);
  return s;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

TEST(TransportTest, NoAttackLeavesTriplesUnchanged) {
  protocol::AuctionSession session(Small().protocol);
  AdversarialTransport t(AttackScenario{}, PublicDirectory::From(session));
  std::vector<protocol::Envelope> batch(3);
  for (std::size_t i = 0; i < 3; ++i) {
    batch[i].message_id = i;
    batch[i].agent = i + 1;
    batch[i].index = 1;
    batch[i].triple = {"agent-" + std::to_string(i + 1), 100 + i, 1, 2};
  }
  auto out = t.Deliver(1, batch);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(out[i]->triple, batch[i].triple);
  EXPECT_EQ(t.transcript().size(), 3u);
}

TEST(ScenarioTest, CleanRunMatchesBaselineEveryCycle) {
  ScenarioConfig c = Small();
  c.cycles = 10;
  c.protocol.signing_enabled = false;
  ScenarioReport r = RunScenario(c, AttackScenario{});
  ASSERT_EQ(r.cycles.size(), 10u);
  for (const CycleSummary& s : r.cycles) EXPECT_TRUE(s.matches_baseline);
  EXPECT_EQ(r.detection.attacked, 0u);
  EXPECT_EQ(r.detection.clean_flagged, 0u);
  EXPECT_FALSE(r.detection.detection_rate().has_value());
  EXPECT_EQ(r.failed_cycles, 0u);
}

TEST(ScenarioTest, SigningDoesNotChangeCleanResults) {
  ScenarioConfig c = Small();
  ScenarioReport on = RunScenario(c, AttackScenario{});
  c.protocol.signing_enabled = false;
  ScenarioReport off = RunScenario(c, AttackScenario{});
  ASSERT_EQ(on.cycles.size(), off.cycles.size());
  for (std::size_t i = 0; i < on.cycles.size(); ++i) {
    EXPECT_EQ(on.cycles[i].result.price_units, off.cycles[i].result.price_units);
    EXPECT_EQ(on.cycles[i].result.demand.values,
              off.cycles[i].result.demand.values);
    EXPECT_EQ(on.cycles[i].result.supply.values,
              off.cycles[i].result.supply.values);
  }
  EXPECT_EQ(on.detection.clean_flagged, 0u);
}

TEST(ScenarioTest, HalfOfOneCycleAttackedIsFullyDetected) {
  ScenarioConfig c = Small(true);
  ScenarioReport r = RunScenario(c, AttackPreset("half-cycle-2"));
  EXPECT_GT(r.detection.attacked, 0u);
  EXPECT_EQ(r.detection.detection_rate(), 1.0);
  EXPECT_EQ(r.detection.false_alarm_rate(), 0.0);
  for (const MessageRecord& m : r.messages) {
    EXPECT_EQ(m.attack != AttackKind::kNone, m.cycle == 2 && !m.flag)
        << m.link << " cycle " << m.cycle;
  }
}

TEST(ScenarioTest, ReorderedAggregatesBothFlagged) {
  ScenarioConfig c = Small(true);
  c.cycles = 1;
  ScenarioReport r =
      RunScenario(c, Rule(1, 1, {AttackKind::kReorder}, 1.0, {LinkGroup::kTpToCo}));
  int attacked = 0;
  for (const MessageRecord& m : r.messages) {
    if (m.group != LinkGroup::kTpToCo) continue;
    EXPECT_EQ(m.attack, AttackKind::kReorder);
    EXPECT_FALSE(m.flag);
    ++attacked;
  }
  EXPECT_EQ(attacked, 2);
}

TEST(ScenarioTest, PerfectDetectionAcrossKindsAndLinks) {
  ScenarioConfig c = Small();
  c.cycles = 2;
  AttackScenario s =
      Rule(1, 2,
           {AttackKind::kTamper, AttackKind::kReplay, AttackKind::kReorder,
            AttackKind::kForge, AttackKind::kDrop},
           0.3);
  s.seed = 99;
  ScenarioReport r = RunScenario(c, s);
  EXPECT_GE(r.detection.attacked, 500u);
  EXPECT_GE(r.detection.clean, 500u);
  EXPECT_EQ(r.detection.detection_rate(), 1.0);
  EXPECT_EQ(r.detection.false_alarm_rate(), 0.0);
  for (LinkGroup g :
       {LinkGroup::kAgentToTp, LinkGroup::kTpToCo, LinkGroup::kCoToAgent}) {
    EXPECT_GT(r.detection_by_group[g].attacked, 0u) << protocol::Name(g);
  }
}

TEST(ScenarioTest, UnsignedTamperOnAggregatesMovesThePrice) {
  ScenarioConfig c = Small();
  c.protocol.signing_enabled = false;
  c.cycles = 2;
  ScenarioReport r = RunScenario(
      c, Rule(1, 2, {AttackKind::kTamper}, 1.0, {LinkGroup::kTpToCo}));
  EXPECT_EQ(r.detection.attacked_flagged, 0u);
  bool moved = false;
  for (const CycleSummary& s : r.cycles) {
    moved |= s.result.price_units != s.baseline_price_units;
    EXPECT_FALSE(s.matches_baseline);
  }
  EXPECT_TRUE(moved);
}

TEST(ScenarioTest, DeterministicReportAndTranscript) {
  ScenarioConfig c = Small(true);
  AttackScenario s = AttackPreset("mixed-cycle-2");
  RunOptions opts{.keep_transcript = true};
  ScenarioReport a = RunScenario(c, s, opts), b = RunScenario(c, s, opts);
  EXPECT_EQ(ToJson(a, false).dump(), ToJson(b, false).dump());
  std::ostringstream ta, tb;
  WriteTranscript(a, ta);
  WriteTranscript(b, tb);
  EXPECT_EQ(ta.str(), tb.str());
  EXPECT_FALSE(ta.str().empty());
}

TEST(ScenarioTest, DropIsFlaggedMissing) {
  ScenarioConfig c = Small(true);
  c.cycles = 2;
  ScenarioReport r = RunScenario(
      c, Rule(2, 2, {AttackKind::kDrop}, 1.0, {LinkGroup::kAgentToTp}));
  EXPECT_EQ(r.detection.detection_rate(), 1.0);
  EXPECT_FALSE(r.cycles[1].result.failed);  // last_good covers every agent
  EXPECT_EQ(r.cycles[1].result.mitigations.size(), 15u);
}

TEST(ScenarioTest, ReplayWithoutHistoryIsSkipped) {
  ScenarioConfig c = Small(true);
  c.cycles = 1;
  ScenarioReport r = RunScenario(
      c, Rule(1, 1, {AttackKind::kReplay}, 1.0, {LinkGroup::kTpToCo}));
  // The supply aggregate goes first, so only the demand one can be replayed.
  ASSERT_EQ(r.skipped_attacks.size(), 1u);
  EXPECT_NE(r.skipped_attacks[0].find("replay"), std::string::npos);
  EXPECT_EQ(r.detection.attacked, 1u);
  EXPECT_EQ(r.detection.detection_rate(), 1.0);
}

// Indices repeat every cycle, so a previous-cycle triple on the same link can
// pass verification. That gap is what the same-cycle default avoids.
TEST(ScenarioTest, CrossCyclePriceReplayCanPass) {
  ScenarioConfig c = Small(true);
  c.cycles = 2;
  AttackScenario s =
      Rule(2, 2, {AttackKind::kReplay}, 1.0, {LinkGroup::kCoToAgent});
  s.replay_scope = ReplayScope::kAnyCycle;
  ScenarioReport r = RunScenario(c, s);
  EXPECT_GT(r.detection.attacked, 0u);
  EXPECT_LT(r.detection.attacked_flagged, r.detection.attacked);
}

TEST(AttackConfigTest, PresetsAndJson) {
  EXPECT_TRUE(AttackPreset("none").rules.empty());
  AttackScenario h = AttackPreset("half-cycle-100");
  ASSERT_EQ(h.rules.size(), 1u);
  EXPECT_EQ(h.rules[0].first_cycle, 100u);
  EXPECT_EQ(h.rules[0].last_cycle, 100u);
  EXPECT_DOUBLE_EQ(h.rules[0].fraction, 0.5);
  EXPECT_EQ(CodeOf([] { AttackPreset("half-cycle-x"); }), ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { AttackPreset("bogus"); }), ErrorCode::kConfigError);

  AttackScenario m = AttackPreset("mixed-cycle-3");
  m.rules[0].agent = 4;
  m.rules[0].groups = {LinkGroup::kCoToAgent};
  m.replay_scope = ReplayScope::kAnyCycle;
  io::Json j = ToJson(m);
  EXPECT_EQ(ToJson(AttackScenarioFromJson(j)).dump(), j.dump());

  io::Json bad = j;
  bad["rules"][0]["fraction"] = 2;
  EXPECT_EQ(CodeOf([&] { AttackScenarioFromJson(bad); }), ErrorCode::kConfigError);
  bad = j;
  bad["rules"][0]["kinds"] = {"smash"};
  EXPECT_EQ(CodeOf([&] { AttackScenarioFromJson(bad); }), ErrorCode::kConfigError);
  bad = j;
  bad["extra"] = 1;
  EXPECT_EQ(CodeOf([&] { AttackScenarioFromJson(bad); }), ErrorCode::kConfigError);
}

TEST(ScenarioConfigTest, DefaultsAndJsonRoundtrip) {
  ScenarioConfig d = ScenarioConfig::Default();
  EXPECT_EQ(d.protocol.grid.n_points(), 101u);
  EXPECT_EQ(d.protocol.n_agents(), 100u);
  io::Json j = ToJson(d);
  EXPECT_EQ(ToJson(ScenarioConfigFromJson(j)).dump(), j.dump());

  io::Json partial = io::ParseJson(
      R"({"protocol": {"key_bits": 512, "block_mode": false}, "cycles": 3})",
      "partial");
  ScenarioConfig p = ScenarioConfigFromJson(partial);
  EXPECT_EQ(p.protocol.key_bits, 512u);
  EXPECT_FALSE(p.protocol.block_mode);
  EXPECT_EQ(p.protocol.clearing, protocol::ClearingRule::kCapacity);
  EXPECT_EQ(p.cycles, 3u);
}

TEST(ScenarioConfigTest, CycleInputsDeterministicAndInRange) {
  ScenarioConfig c = Small();
  for (std::uint64_t cycle : {1u, 50u, 288u, 300u}) {
    protocol::CycleInputs a = CycleInputsFor(c, cycle), b = CycleInputsFor(c, cycle);
    EXPECT_EQ(a.demand, b.demand);
    EXPECT_EQ(a.supply, b.supply);
    EXPECT_GE(a.base_price_index, 1u);
    EXPECT_LE(a.base_price_index, 101u);
  }
  EXPECT_NE(CycleInputsFor(c, 1).demand, CycleInputsFor(c, 2).demand);
}

TEST(BenchOutputTest, CsvHeaderAndRoles) {
  ScenarioConfig c = Small();
  c.cycles = 1;
  ScenarioReport r = RunScenario(c, AttackScenario{});
  std::vector<BenchRecord> rows = RoleTimes(r);
  ASSERT_EQ(rows.size(), 3u);
  for (const BenchRecord& b : rows) EXPECT_GT(b.seconds_per_cycle, 0);
  std::ostringstream csv;
  WriteBenchCsv(rows, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "key_bits,mode,role,seconds_per_cycle");
  EXPECT_NE(csv.str().find("256,pointwise,agent,"), std::string::npos);
  EXPECT_NE(csv.str().find("256,pointwise,CO,"), std::string::npos);
}

}  // namespace
}  // namespace ptes::simulator
