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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "ptes/error.h"
#include "ptes/packing.h"

namespace ptes::simulator {
namespace {

using protocol::Envelope;
using protocol::LinkGroup;

constexpr std::uint64_t kPopulationStream = 0x706f70;
constexpr std::uint64_t kForgeStream = 0x666f7267;
constexpr std::uint64_t kTamperStream = 0x74616d70;

constexpr LinkGroup kGroups[] = {LinkGroup::kAgentToTp, LinkGroup::kTpToCo,
                                 LinkGroup::kCoToAgent};

bool CarriesCiphertext(const Envelope& e) {
  return e.group != LinkGroup::kCoToAgent;
}

// The message part of a triple, or z itself on an unauthenticated link.
BigNat MessageOf(const Envelope& e) {
  if (!e.authenticated) return e.triple.z;
  BigNat m = e.triple.z;
  m %= packing::Pow10(e.width);
  return m;
}

std::uint64_t ParseCycleSuffix(std::string_view name, std::string_view prefix) {
  std::string_view rest = name.substr(prefix.size());
  std::uint64_t cycle = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), cycle);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || cycle == 0) {
    throw Error(ErrorCode::kConfigError,
                "attack preset '" + std::string(name) + "' needs a cycle >= 1");
  }
  return cycle;
}

}  // namespace

std::string_view Name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone: return "none";
    case AttackKind::kTamper: return "tamper";
    case AttackKind::kReplay: return "replay";
    case AttackKind::kReorder: return "reorder";
    case AttackKind::kForge: return "forge";
    case AttackKind::kDrop: return "drop";
  }
  return "?";
}

AttackKind ParseAttackKind(std::string_view name) {
  for (AttackKind k : {AttackKind::kNone, AttackKind::kTamper,
                       AttackKind::kReplay, AttackKind::kReorder,
                       AttackKind::kForge, AttackKind::kDrop}) {
    if (Name(k) == name) return k;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown attack kind '" + std::string(name) + "'");
}

AttackScenario AttackPreset(std::string_view name) {
  AttackScenario scenario;
  if (name == "none") return scenario;
  AttackRule rule;
  if (name.starts_with("half-cycle-")) {
    rule.first_cycle = rule.last_cycle = ParseCycleSuffix(name, "half-cycle-");
  } else if (name.starts_with("mixed-cycle-")) {
    rule.first_cycle = rule.last_cycle = ParseCycleSuffix(name, "mixed-cycle-");
    rule.kinds = {AttackKind::kTamper, AttackKind::kReplay,
                  AttackKind::kReorder, AttackKind::kForge};
  } else {
    throw Error(ErrorCode::kConfigError,
                "unknown attack preset '" + std::string(name) + "'");
  }
  scenario.rules.push_back(rule);
  return scenario;
}

AttackScenario AttackScenarioFromJson(const io::Json& j) {
  io::ObjectReader r(j, "attacks");
  AttackScenario s;
  r.Read("seed", s.seed);
  if (r.Has("replay_scope")) {
    std::string scope;
    r.Read("replay_scope", scope);
    if (scope == "same_cycle") {
      s.replay_scope = ReplayScope::kSameCycle;
    } else if (scope == "any_cycle") {
      s.replay_scope = ReplayScope::kAnyCycle;
    } else {
      r.Fail("replay_scope", "must be same_cycle or any_cycle");
    }
  }
  if (r.Has("rules")) {
    const io::Json& rules = r.Raw("rules");
    if (!rules.is_array()) r.Fail("rules", "must be an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      io::ObjectReader rr(rules[i], "attacks.rules[" + std::to_string(i) + "]");
      AttackRule rule;
      if (rr.Has("cycles")) {
        std::vector<std::uint64_t> range;
        rr.Read("cycles", range);
        if (range.size() != 2 || range[0] < 1 || range[1] < range[0]) {
          rr.Fail("cycles", "must be [first, last] with 1 <= first <= last");
        }
        rule.first_cycle = range[0];
        rule.last_cycle = range[1];
      }
      if (rr.Has("links")) {
        std::vector<std::string> names;
        rr.Read("links", names);
        for (const auto& n : names) {
          rule.groups.push_back(protocol::ParseLinkGroup(n));
        }
      }
      if (rr.Has("kinds")) {
        std::vector<std::string> names;
        rr.Read("kinds", names);
        rule.kinds.clear();
        for (const auto& n : names) rule.kinds.push_back(ParseAttackKind(n));
        if (rule.kinds.empty()) rr.Fail("kinds", "must not be empty");
      }
      rr.Read("fraction", rule.fraction);
      if (!(rule.fraction >= 0 && rule.fraction <= 1)) {
        rr.Fail("fraction", "must be in [0, 1]");
      }
      if (rr.Has("agent")) {
        std::size_t agent = 0;
        rr.Read("agent", agent);
        rule.agent = agent;
      }
      rr.Finish();
      s.rules.push_back(std::move(rule));
    }
  }
  r.Finish();
  return s;
}

io::Json ToJson(const AttackScenario& scenario) {
  io::Json rules = io::Json::array();
  for (const AttackRule& rule : scenario.rules) {
    io::Json links = io::Json::array(), kinds = io::Json::array();
    for (LinkGroup g : rule.groups) links.push_back(protocol::Name(g));
    for (AttackKind k : rule.kinds) kinds.push_back(Name(k));
    io::Json entry{{"cycles", {rule.first_cycle, rule.last_cycle}},
                   {"links", links},
                   {"kinds", kinds},
                   {"fraction", rule.fraction}};
    if (rule.agent) entry["agent"] = *rule.agent;
    rules.push_back(std::move(entry));
  }
  return io::Json{{"seed", scenario.seed},
                  {"replay_scope", scenario.replay_scope == ReplayScope::kSameCycle
                                       ? "same_cycle"
                                       : "any_cycle"},
                  {"rules", rules}};
}

PublicDirectory PublicDirectory::From(const protocol::AuctionSession& session) {
  const protocol::Parties& parties = session.parties();
  PublicDirectory d{parties.coordinator.public_key(), {},
                    session.price_width()};
  d.signer_bits["co"] = parties.coordinator.bits();
  if (parties.third_party) d.signer_bits["tp"] = parties.third_party->bits();
  for (const paillier::KeySet& k : parties.agents) {
    d.signer_bits[k.key_id()] = k.bits();
  }
  return d;
}

AdversarialTransport::AdversarialTransport(AttackScenario scenario,
                                           PublicDirectory directory)
    : scenario_(std::move(scenario)), directory_(std::move(directory)) {}

AttackKind AdversarialTransport::Choose(std::uint64_t cycle, const Envelope& e,
                                        Rng& rng) {
  for (const AttackRule& rule : scenario_.rules) {
    if (cycle < rule.first_cycle || cycle > rule.last_cycle) continue;
    if (!rule.groups.empty() &&
        std::find(rule.groups.begin(), rule.groups.end(), e.group) ==
            rule.groups.end()) {
      continue;
    }
    if (rule.agent && e.agent != *rule.agent) continue;
    if (!rng.Bernoulli(rule.fraction)) return AttackKind::kNone;
    return rule.kinds[rng.UniformInt(0, rule.kinds.size() - 1)];
  }
  return AttackKind::kNone;
}

BigNat AdversarialTransport::RandomMessage(const Envelope& e, Rng& rng) const {
  if (CarriesCiphertext(e)) return rng.Below(directory_.coordinator.alpha_squared);
  return rng.Below(packing::Pow10(directory_.price_width));
}

const paillier::KeySet& AdversarialTransport::TamperKey(std::uint64_t cycle,
                                                        unsigned long bits,
                                                        Rng& rng) {
  auto key = std::make_pair(cycle, bits);
  auto it = tamper_keys_.find(key);
  if (it == tamper_keys_.end()) {
    std::erase_if(tamper_keys_,
                  [&](const auto& kv) { return kv.first.first < cycle; });
    Rng key_rng(DeriveSeed(scenario_.seed, {kTamperStream, cycle, bits,
                                            rng.NextU64()}));
    it = tamper_keys_
             .emplace(key, paillier::Keygen(bits, 1, key_rng,
                                            {.key_id = "adversary"}))
             .first;
  }
  return it->second;
}

const paillier::KeySet& AdversarialTransport::ForgeKey(unsigned long bits) {
  auto it = forge_keys_.find(bits);
  if (it == forge_keys_.end()) {
    Rng key_rng(DeriveSeed(scenario_.seed, {kForgeStream, bits}));
    it = forge_keys_
             .emplace(bits, paillier::Keygen(bits, 1, key_rng,
                                             {.key_id = "forger"}))
             .first;
  }
  return it->second;
}

void AdversarialTransport::Resign(Envelope& e, const BigNat& message,
                                  const paillier::KeySet& keys) {
  const std::string signer = e.triple.signer_id;
  e.triple = signature::AuthSend(keys, message, e.index, e.width);
  e.triple.signer_id = signer;
}

std::vector<std::optional<Envelope>> AdversarialTransport::Deliver(
    std::uint64_t cycle, std::vector<Envelope> batch) {
  std::vector<std::optional<Envelope>> out(batch.begin(), batch.end());
  if (batch.empty()) return out;
  const LinkGroup group = batch.front().group;
  const int gkey = static_cast<int>(group);
  Rng rng(DeriveSeed(scenario_.seed, {cycle, static_cast<std::uint64_t>(gkey)}));
  const std::size_t n = batch.size();

  std::vector<AttackKind> planned(n), applied(n, AttackKind::kNone);
  for (std::size_t k = 0; k < n; ++k) planned[k] = Choose(cycle, batch[k], rng);

  const std::vector<Envelope>* previous = nullptr;
  if (scenario_.replay_scope == ReplayScope::kAnyCycle && cycle > 1) {
    auto it = observed_.find({cycle - 1, gkey});
    if (it != observed_.end()) previous = &it->second;
  }
  auto skip = [&](std::size_t k, const std::string& why) {
    skipped_.push_back("cycle " + std::to_string(cycle) + " " +
                       std::string(Name(planned[k])) + " on " +
                       batch[k].Link() + " skipped: " + why);
  };
  // Swaps against a link-mate if one is free, else any free message.
  auto pick = [&](std::size_t k, const std::vector<const Envelope*>& pool) {
    std::vector<const Envelope*> same;
    for (const Envelope* e : pool) {
      if (e->Link() == batch[k].Link()) same.push_back(e);
    }
    const auto& from = same.empty() ? pool : same;
    return from[rng.UniformInt(0, from.size() - 1)];
  };

  for (std::size_t k = 0; k < n; ++k) {
    const Envelope& sent = batch[k];
    switch (planned[k]) {
      case AttackKind::kNone:
        break;
      case AttackKind::kDrop:
        out[k].reset();
        applied[k] = AttackKind::kDrop;
        break;
      case AttackKind::kTamper:
      case AttackKind::kForge: {
        const bool forge = planned[k] == AttackKind::kForge;
        const BigNat original = MessageOf(sent);
        Envelope e = sent;
        for (;;) {
          BigNat m;
          if (forge && CarriesCiphertext(sent)) {
            // A well-formed encryption of a value of the forger's choosing.
            m = paillier::Encrypt(directory_.coordinator,
                                  rng.Below(BigNat(1000000)), rng)
                    .value;
          } else {
            m = RandomMessage(sent, rng);
          }
          if (m == original) continue;
          if (!sent.authenticated) {
            e.triple.z = m;
            break;
          }
          const unsigned long bits = directory_.signer_bits.at(sent.triple.signer_id);
          try {
            Resign(e, m, forge ? ForgeKey(bits) : TamperKey(cycle, bits, rng));
            break;
          } catch (const Error& err) {
            if (err.code() != ErrorCode::kUnsignableMessage) throw;
          }
        }
        out[k] = std::move(e);
        applied[k] = planned[k];
        break;
      }
      case AttackKind::kReplay: {
        std::vector<const Envelope*> pool;
        for (std::size_t j = 0; j < k; ++j) {
          if (batch[j].triple != sent.triple) pool.push_back(&batch[j]);
        }
        if (previous) {
          for (const Envelope& e : *previous) {
            if (e.triple != sent.triple) pool.push_back(&e);
          }
        }
        if (pool.empty()) {
          skip(k, "no earlier traffic to replay");
          break;
        }
        Envelope e = sent;
        e.triple = pick(k, pool)->triple;
        out[k] = std::move(e);
        applied[k] = AttackKind::kReplay;
        break;
      }
      case AttackKind::kReorder: {
        if (applied[k] != AttackKind::kNone) break;  // already a partner
        std::vector<const Envelope*> pool;
        for (std::size_t j = 0; j < n; ++j) {
          const bool free = planned[j] == AttackKind::kNone ||
                            planned[j] == AttackKind::kReorder;
          if (j != k && free &&
              applied[j] == AttackKind::kNone && out[j] &&
              batch[j].triple != sent.triple) {
            pool.push_back(&batch[j]);
          }
        }
        if (pool.empty()) {
          skip(k, "no other message in flight");
          break;
        }
        const std::size_t j = pick(k, pool) - batch.data();
        std::swap(out[k]->triple, out[j]->triple);
        applied[k] = applied[j] = AttackKind::kReorder;
        break;
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (applied[k] != AttackKind::kNone) {
      attacks_[{cycle, batch[k].message_id}] = applied[k];
    }
    if (keep_transcript_) {
      transcript_.push_back({cycle, batch[k], out[k], applied[k]});
    }
  }
  std::erase_if(observed_,
                [&](const auto& kv) { return kv.first.first + 1 < cycle; });
  observed_[{cycle, gkey}] = std::move(batch);
  return out;
}

AttackKind AdversarialTransport::AttackOn(std::uint64_t cycle,
                                          std::uint64_t message_id) const {
  auto it = attacks_.find({cycle, message_id});
  return it == attacks_.end() ? AttackKind::kNone : it->second;
}

ScenarioConfig ScenarioConfig::Default() {
  ScenarioConfig c;
  c.protocol.n_suppliers = 0;
  c.protocol.n_customers = 100;
  c.protocol.key_bits = 1024;
  c.protocol.block_mode = true;
  c.protocol.allow_block_split = true;
  c.protocol.signing_enabled = true;
  c.protocol.clearing = protocol::ClearingRule::kCapacity;
  c.protocol.capacity = 200.0;
  return c;
}

namespace {

market::PopulationParams PopulationFromJson(const io::Json& j,
                                            const std::string& path,
                                            market::PopulationParams p) {
  io::ObjectReader r(j, path);
  r.Read("price_lo", p.price_lo);
  r.Read("price_hi", p.price_hi);
  r.Read("power_lo", p.power_lo);
  r.Read("power_hi", p.power_hi);
  r.Finish();
  return p;
}

io::Json PopulationToJson(const market::PopulationParams& p) {
  return io::Json{{"price_lo", p.price_lo},
                  {"price_hi", p.price_hi},
                  {"power_lo", p.power_lo},
                  {"power_hi", p.power_hi}};
}

}  // namespace

ScenarioConfig ScenarioConfigFromJson(const io::Json& j) {
  ScenarioConfig c = ScenarioConfig::Default();
  io::ObjectReader r(j, "config");
  if (r.Has("protocol")) {
    // Unset protocol keys keep the scenario defaults.
    io::Json merged = io::ToJson(c.protocol);
    const io::Json& given = r.Raw("protocol");
    if (!given.is_object()) r.Fail("protocol", "must be an object");
    for (const auto& [key, value] : given.items()) merged[key] = value;
    c.protocol = io::ProtocolConfigFromJson(merged, "config.protocol");
  }
  if (r.Has("supply")) {
    c.supply = PopulationFromJson(r.Raw("supply"), "config.supply", c.supply);
  }
  if (r.Has("demand")) {
    c.demand = PopulationFromJson(r.Raw("demand"), "config.demand", c.demand);
  }
  r.Read("cycles", c.cycles);
  r.Read("cycles_per_day", c.cycles_per_day);
  r.Read("activity_mean", c.activity_mean);
  r.Read("activity_amplitude", c.activity_amplitude);
  r.Read("base_price_low", c.base_price_low);
  r.Read("base_price_high", c.base_price_high);
  r.Finish();
  if (c.cycles_per_day == 0) r.Fail("cycles_per_day", "must be positive");
  return c;
}

io::Json ToJson(const ScenarioConfig& c) {
  return io::Json{{"protocol", io::ToJson(c.protocol)},
                  {"supply", PopulationToJson(c.supply)},
                  {"demand", PopulationToJson(c.demand)},
                  {"cycles", c.cycles},
                  {"cycles_per_day", c.cycles_per_day},
                  {"activity_mean", c.activity_mean},
                  {"activity_amplitude", c.activity_amplitude},
                  {"base_price_low", c.base_price_low},
                  {"base_price_high", c.base_price_high}};
}

protocol::CycleInputs CycleInputsFor(const ScenarioConfig& config,
                                     std::uint64_t cycle) {
  const protocol::ProtocolConfig& pc = config.protocol;
  const market::PriceGrid& grid = pc.grid;
  const double phase = 2 * std::numbers::pi *
                       static_cast<double>((cycle - 1) % config.cycles_per_day) /
                       static_cast<double>(config.cycles_per_day);
  const std::uint64_t seed = DeriveSeed(pc.seed, {kPopulationStream, cycle});

  market::PopulationParams supply = config.supply;
  supply.kind = market::CurveKind::kSupply;
  supply.n_agents = pc.n_suppliers;
  supply.delta = pc.delta_s;
  supply.seed = seed;
  supply.first_id = 1;
  supply.id_prefix = "agent-";
  supply.active_probability = 1.0;

  market::PopulationParams demand = config.demand;
  demand.kind = market::CurveKind::kDemand;
  demand.n_agents = pc.n_customers;
  demand.delta = pc.delta_d;
  demand.seed = seed;
  demand.first_id = pc.n_suppliers + 1;
  demand.id_prefix = "agent-";
  demand.active_probability = std::clamp(
      config.activity_mean + config.activity_amplitude * std::sin(phase), 0.0,
      1.0);

  protocol::CycleInputs in;
  in.supply = market::GenPopulation(supply, grid);
  in.demand = market::GenPopulation(demand, grid);
  const double base = config.base_price_low +
                      (config.base_price_high - config.base_price_low) *
                          (1 - std::cos(phase)) / 2;
  const double steps = std::round((base - grid.lambda_min()) / grid.tau());
  in.base_price_index = static_cast<std::size_t>(std::clamp(
                            steps, 0.0, static_cast<double>(grid.n_points() - 1))) +
                        1;
  return in;
}

std::optional<double> DetectionStats::detection_rate() const {
  if (attacked == 0) return std::nullopt;
  return static_cast<double>(attacked_flagged) / static_cast<double>(attacked);
}

std::optional<double> DetectionStats::false_alarm_rate() const {
  if (clean == 0) return std::nullopt;
  return static_cast<double>(clean_flagged) / static_cast<double>(clean);
}

ScenarioReport RunScenario(const ScenarioConfig& config,
                           const AttackScenario& attacks,
                           const RunOptions& options) {
  const protocol::ProtocolConfig& pc = config.protocol;
  protocol::AuctionSession session =
      options.parties ? protocol::AuctionSession(pc, *options.parties)
                      : protocol::AuctionSession(pc);
  AdversarialTransport transport(attacks, PublicDirectory::From(session));
  transport.set_keep_transcript(options.keep_transcript);

  ScenarioReport report;
  report.key_bits = pc.key_bits;
  report.mode = pc.block_mode ? "block" : "pointwise";
  report.signing_enabled = pc.signing_enabled;
  report.n_agents = pc.n_agents();
  for (std::uint64_t cycle = 1; cycle <= config.cycles; ++cycle) {
    const protocol::CycleInputs inputs = CycleInputsFor(config, cycle);
    CycleSummary summary;
    summary.result = session.RunCycle(cycle, inputs, transport);
    const protocol::ClearingResult baseline = protocol::ClearPlaintext(pc, inputs);
    summary.baseline_index = baseline.clearing.index;
    summary.baseline_price_units = baseline.price_units;
    summary.matches_baseline =
        summary.result.clearing.index == baseline.clearing.index &&
        summary.result.supply.values == baseline.supply.values &&
        summary.result.demand.values == baseline.demand.values;
    if (summary.result.failed) ++report.failed_cycles;
    for (const protocol::LinkFlag& f : summary.result.flags) {
      MessageRecord m{cycle,   f.message_id, f.group, f.link, f.index,
                      transport.AttackOn(cycle, f.message_id), f.flag};
      for (DetectionStats* s : {&report.detection, &report.detection_by_group[f.group]}) {
        if (m.attack != AttackKind::kNone) {
          ++s->attacked;
          s->attacked_flagged += !f.flag;
        } else {
          ++s->clean;
          s->clean_flagged += !f.flag;
        }
      }
      report.messages.push_back(std::move(m));
    }
    for (const protocol::TimingRecord& t : summary.result.timing) {
      report.timing[{t.role, t.phase}] += t.seconds;
    }
    report.cycles.push_back(std::move(summary));
  }
  report.skipped_attacks = transport.skipped();
  report.transcript = transport.transcript();
  return report;
}

namespace {

io::Json RateJson(std::optional<double> rate) {
  return rate ? io::Json(*rate) : io::Json(nullptr);
}

io::Json StatsJson(const DetectionStats& s) {
  return io::Json{{"attacked", s.attacked},
                  {"attacked_flagged", s.attacked_flagged},
                  {"clean", s.clean},
                  {"clean_flagged", s.clean_flagged},
                  {"detection_rate", RateJson(s.detection_rate())},
                  {"false_alarm_rate", RateJson(s.false_alarm_rate())}};
}

io::Json EnvelopeJson(const Envelope& e) {
  io::Json j = io::ToJson(e.triple);
  if (!e.authenticated) {
    j.erase("s1");
    j.erase("s2");
  }
  return j;
}

}  // namespace

io::Json ToJson(const ScenarioReport& report, bool include_timing) {
  io::Json by_group = io::Json::object();
  for (LinkGroup g : kGroups) {
    auto it = report.detection_by_group.find(g);
    by_group[std::string(protocol::Name(g))] =
        StatsJson(it == report.detection_by_group.end() ? DetectionStats{}
                                                        : it->second);
  }
  io::Json detection = StatsJson(report.detection);
  detection["by_group"] = std::move(by_group);

  io::Json cycles = io::Json::array();
  for (const CycleSummary& c : report.cycles) {
    io::Json result = io::ToJson(c.result, include_timing);
    result.erase("flags");  // carried by "messages"
    cycles.push_back({{"result", std::move(result)},
                      {"baseline_index", c.baseline_index},
                      {"baseline_price_units", ToDecimal(c.baseline_price_units)},
                      {"matches_baseline", c.matches_baseline}});
  }
  io::Json messages = io::Json::array();
  for (const MessageRecord& m : report.messages) {
    messages.push_back(
        {{"cycle", m.cycle},
         {"message_id", m.message_id},
         {"group", protocol::Name(m.group)},
         {"link", m.link},
         {"index", m.index},
         {"attack", m.attack == AttackKind::kNone ? io::Json(nullptr)
                                                  : io::Json(Name(m.attack))},
         {"flag", m.flag ? 1 : 0}});
  }
  io::Json out{{"key_bits", report.key_bits},
               {"mode", report.mode},
               {"signing_enabled", report.signing_enabled},
               {"n_agents", report.n_agents},
               {"n_cycles", report.cycles.size()},
               {"failed_cycles", report.failed_cycles},
               {"detection", std::move(detection)},
               {"skipped_attacks", report.skipped_attacks},
               {"cycles", std::move(cycles)},
               {"messages", std::move(messages)}};
  if (include_timing) {
    io::Json timing = io::Json::array();
    const double n = std::max<std::size_t>(report.cycles.size(), 1);
    for (const auto& [key, seconds] : report.timing) {
      timing.push_back({{"role", key.first},
                        {"phase", key.second},
                        {"seconds_total", seconds},
                        {"seconds_per_cycle", seconds / n}});
    }
    out["timing"] = std::move(timing);
  }
  return out;
}

void WriteTranscript(const ScenarioReport& report, std::ostream& out) {
  for (const TranscriptEntry& t : report.transcript) {
    io::Json line{{"cycle", t.cycle},
                  {"message_id", t.sent.message_id},
                  {"group", protocol::Name(t.sent.group)},
                  {"link", t.sent.Link()},
                  {"index", t.sent.index},
                  {"attack", Name(t.attack)},
                  {"sent", EnvelopeJson(t.sent)},
                  {"delivered", t.delivered ? EnvelopeJson(*t.delivered)
                                            : io::Json(nullptr)}};
    out << line.dump() << '\n';
  }
}

std::vector<BenchRecord> RoleTimes(const ScenarioReport& report) {
  const double cycles = std::max<std::size_t>(report.cycles.size(), 1);
  auto total = [&](const std::string& role,
                   std::initializer_list<const char*> phases) {
    double s = 0;
    for (const char* p : phases) {
      auto it = report.timing.find({role, p});
      if (it != report.timing.end()) s += it->second;
    }
    return s / cycles;
  };
  const double agents = std::max<std::size_t>(report.n_agents, 1);
  return {
      {report.key_bits, report.mode, "agent",
       total("agent", {"encrypt", "sign"}) / agents},
      {report.key_bits, report.mode, "TP",
       total("tp", {"verify", "aggregate", "sign"})},
      {report.key_bits, report.mode, "CO",
       total("co", {"verify", "decrypt", "clear"})},
  };
}

void WriteBenchCsv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kBenchCsvHeader << '\n';
  char buf[64];
  for (const BenchRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%.9g", r.seconds_per_cycle);
    out << r.key_bits << ',' << r.mode << ',' << r.role << ',' << buf << '\n';
  }
}

}  // namespace ptes::simulator
