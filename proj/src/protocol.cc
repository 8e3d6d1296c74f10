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

#include "ptes/protocol.h"

#include <algorithm>
#include <chrono>
#include <set>
#include <span>

#include "ptes/error.h"
#include "ptes/rng.h"

namespace ptes::protocol {
namespace {

using market::CurveKind;
using market::SampledCurve;
using paillier::Ciphertext;
using paillier::KeySet;
using paillier::PublicKey;

constexpr std::uint64_t kKeyStream = 0x6b657973;
constexpr std::uint64_t kEncryptStream = 0x656e63;
constexpr std::uint64_t kTpStream = 0x7470;

std::string AgentName(std::size_t agent) {
  return "agent-" + std::to_string(agent);
}

int SideKey(CurveKind side) { return side == CurveKind::kSupply ? 0 : 1; }

template <typename E>
E ParseName(std::string_view name, std::initializer_list<E> values,
            std::string_view what) {
  for (E v : values) {
    if (Name(v) == name) return v;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

// Sums wall time per (role, phase).
class PhaseClock {
 public:
  template <typename F>
  auto Time(const std::string& role, const std::string& phase, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    struct Stop {
      PhaseClock* clock;
      const std::string& role;
      const std::string& phase;
      std::chrono::steady_clock::time_point start;
      ~Stop() {
        clock->totals_[{role, phase}] +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
      }
    } stop{this, role, phase, start};
    return fn();
  }

  std::vector<TimingRecord> Records() const {
    std::vector<TimingRecord> out;
    for (const auto& [key, seconds] : totals_) {
      out.push_back({key.first, key.second, seconds});
    }
    return out;
  }

 private:
  std::map<std::pair<std::string, std::string>, double> totals_;
};

struct Opened {
  bool flag = false;
  std::optional<BigNat> message;
  std::string reason;
};

}  // namespace

std::string_view Name(MitigationPolicy policy) {
  switch (policy) {
    case MitigationPolicy::kLastGood: return "last_good";
    case MitigationPolicy::kDropAgent: return "drop_agent";
    case MitigationPolicy::kHistorical: return "historical";
  }
  return "?";
}

std::string_view Name(ClearingRule rule) {
  return rule == ClearingRule::kTwoSided ? "two_sided" : "capacity";
}

std::string_view Name(LinkGroup group) {
  switch (group) {
    case LinkGroup::kAgentToTp: return "agent_tp";
    case LinkGroup::kTpToCo: return "tp_co";
    case LinkGroup::kCoToAgent: return "co_agent";
  }
  return "?";
}

MitigationPolicy ParseMitigationPolicy(std::string_view name) {
  return ParseName(name,
                   {MitigationPolicy::kLastGood, MitigationPolicy::kDropAgent,
                    MitigationPolicy::kHistorical},
                   "mitigation policy");
}

ClearingRule ParseClearingRule(std::string_view name) {
  return ParseName(name, {ClearingRule::kTwoSided, ClearingRule::kCapacity},
                   "clearing rule");
}

LinkGroup ParseLinkGroup(std::string_view name) {
  return ParseName(name,
                   {LinkGroup::kAgentToTp, LinkGroup::kTpToCo,
                    LinkGroup::kCoToAgent},
                   "link group");
}

BigNat ColumnBound(std::size_t n_agents, double delta, int sigma) {
  return BigNat(static_cast<unsigned long>(n_agents)) *
         market::CeilUnits(delta, sigma);
}

std::pair<std::size_t, std::size_t> BlockLayout::Slots(
    std::size_t block, std::size_t n_points) const {
  const std::size_t first = (block - 1) * slots_per_block + 1;
  return {first, std::min(slots_per_block, n_points - first + 1)};
}

BlockLayout PlanBlocks(const ProtocolConfig& config) {
  if (config.n_customers == 0) {
    throw Error(ErrorCode::kConfigError, "market needs at least one customer");
  }
  if (config.clearing == ClearingRule::kTwoSided && config.n_suppliers == 0) {
    throw Error(ErrorCode::kConfigError,
                "two-sided clearing needs at least one supplier");
  }
  if (config.key_bits < 16) {
    throw Error(ErrorCode::kBoundViolation, "key_bits below 16");
  }
  const int sigma = config.grid.sigma();
  const std::size_t n_points = config.grid.n_points();
  const BigNat bs = ColumnBound(config.n_suppliers, config.delta_s, sigma);
  const BigNat bd = ColumnBound(config.n_customers, config.delta_d, sigma);

  BlockLayout layout;
  layout.supply_width = packing::NumDigits(bs);
  layout.demand_width = packing::NumDigits(bd);
  auto bound_for = [&](std::size_t slots) {
    BigNat b = packing::PackedAlphaBound(slots, bd);
    if (config.n_suppliers > 0) {
      b = std::max(b, packing::PackedAlphaBound(slots, bs));
    }
    return b;
  };
  BigNat limit = 1;
  limit <<= config.key_bits - 1;

  std::size_t slots = config.block_mode ? n_points : 1;
  if (bound_for(slots) >= limit && config.block_mode &&
      config.allow_block_split) {
    std::size_t lo = 1, hi = n_points;  // largest fitting count in [lo, hi)
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      (bound_for(mid) < limit ? lo : hi) = mid;
    }
    slots = lo;
  }
  layout.alpha_bound = bound_for(slots);
  if (layout.alpha_bound >= limit) {
    throw Error(ErrorCode::kBoundViolation,
                "plaintext bound needs " +
                    std::to_string(BitLength(layout.alpha_bound) + 1) +
                    " key bits, have " + std::to_string(config.key_bits));
  }
  layout.slots_per_block = slots;
  layout.n_blocks = (n_points + slots - 1) / slots;
  return layout;
}

Parties MakeParties(const ProtocolConfig& config, const BlockLayout& layout) {
  Rng rng(DeriveSeed(config.seed, {kKeyStream}));
  Parties parties{paillier::Keygen(config.key_bits, layout.alpha_bound, rng,
                                   {.key_id = "co"}),
                  std::nullopt,
                  {}};
  if (config.signing_enabled) {
    const unsigned long bits = config.key_bits + kSigningKeyMargin;
    parties.third_party = paillier::Keygen(bits, 1, rng, {.key_id = "tp"});
    parties.agents.reserve(config.n_agents());
    for (std::size_t i = 1; i <= config.n_agents(); ++i) {
      parties.agents.push_back(
          paillier::Keygen(bits, 1, rng, {.key_id = AgentName(i)}));
    }
  }
  return parties;
}

std::string Envelope::Link() const {
  switch (group) {
    case LinkGroup::kAgentToTp: return AgentName(agent) + "->tp";
    case LinkGroup::kTpToCo: return "tp->co";
    case LinkGroup::kCoToAgent: return "co->" + AgentName(agent);
  }
  return "?";
}

std::vector<std::optional<Envelope>> DirectTransport::Deliver(
    std::uint64_t, std::vector<Envelope> batch) {
  return {std::make_move_iterator(batch.begin()),
          std::make_move_iterator(batch.end())};
}

ClearingResult ClearPlaintext(const ProtocolConfig& config,
                              const CycleInputs& inputs,
                              const std::vector<std::size_t>& exclude) {
  const std::size_t n_points = config.grid.n_points();
  const std::set<std::size_t> skip(exclude.begin(), exclude.end());
  auto sum = [&](const std::vector<SampledCurve>& curves, CurveKind kind,
                 std::size_t first_agent) {
    std::vector<SampledCurve> kept;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (!skip.contains(first_agent + i)) kept.push_back(curves[i]);
    }
    SampledCurve out = kept.empty() ? market::ZeroCurve(kind, n_points)
                                    : market::Aggregate(kept);
    out.owner_id = "aggregate";
    return out;
  };
  ClearingResult result;
  result.supply = sum(inputs.supply, CurveKind::kSupply, 1);
  result.demand =
      sum(inputs.demand, CurveKind::kDemand, inputs.supply.size() + 1);
  result.clearing =
      config.clearing == ClearingRule::kTwoSided
          ? market::ClearTwoSided(result.supply, result.demand, config.grid)
          : market::ClearCapacity(result.demand, config.capacity,
                                  inputs.base_price_index, config.grid);
  result.price_units = config.grid.PriceUnits(result.clearing.index);
  result.dropped_agents = {skip.begin(), skip.end()};
  return result;
}

AuctionSession::AuctionSession(ProtocolConfig config)
    : AuctionSession(config, MakeParties(config, PlanBlocks(config))) {}

AuctionSession::AuctionSession(ProtocolConfig config, Parties parties)
    : config_(std::move(config)),
      layout_(PlanBlocks(config_)),
      parties_(std::move(parties)) {
  if (parties_.coordinator.alpha() <= layout_.alpha_bound) {
    throw Error(ErrorCode::kBoundViolation,
                "coordinator modulus does not exceed the plaintext bound");
  }
  if (config_.signing_enabled &&
      (!parties_.third_party ||
       parties_.agents.size() != config_.n_agents())) {
    throw Error(ErrorCode::kConfigError, "signing keys missing");
  }
  ciphertext_width_ =
      packing::NumDigits(parties_.coordinator.public_key().alpha_squared);
  price_width_ =
      packing::NumDigits(config_.grid.PriceUnits(config_.grid.n_points()));
}

ClearingResult AuctionSession::RunCycle(std::uint64_t cycle,
                                        const CycleInputs& inputs,
                                        Transport& transport) {
  const market::PriceGrid& grid = config_.grid;
  const std::size_t n_points = grid.n_points();
  const std::size_t n_s = config_.n_suppliers;
  const std::size_t n_agents = config_.n_agents();
  if (inputs.supply.size() != n_s || inputs.demand.size() != config_.n_customers) {
    throw Error(ErrorCode::kConfigError, "population size differs from config");
  }
  const BigNat delta_s = market::CeilUnits(config_.delta_s, grid.sigma());
  const BigNat delta_d = market::CeilUnits(config_.delta_d, grid.sigma());
  auto curve_of = [&](std::size_t agent) -> const SampledCurve& {
    return agent <= n_s ? inputs.supply[agent - 1]
                        : inputs.demand[agent - n_s - 1];
  };
  auto side_of = [&](std::size_t agent) {
    return agent <= n_s ? CurveKind::kSupply : CurveKind::kDemand;
  };
  for (std::size_t a = 1; a <= n_agents; ++a) {
    const SampledCurve& c = curve_of(a);
    if (c.kind != side_of(a)) {
      throw Error(ErrorCode::kKindMismatch, AgentName(a) + " curve kind");
    }
    if (c.values.size() != n_points) {
      throw Error(ErrorCode::kGridMismatch, AgentName(a) + " curve length");
    }
    const BigNat& cap = a <= n_s ? delta_s : delta_d;
    for (const BigNat& v : c.values) {
      if (v < 0 || v >= cap) {
        throw Error(ErrorCode::kBoundViolation,
                    AgentName(a) + " quantity outside [0, delta)");
      }
    }
  }

  const KeySet& co = parties_.coordinator;
  const PublicKey& co_pk = co.public_key();
  const bool signing = config_.signing_enabled;
  ClearingResult result;
  result.cycle = cycle;
  PhaseClock clock;
  std::uint64_t next_id = 0;

  auto fail = [&](const std::string& what) {
    result.failed = true;
    result.failures.push_back(what);
  };
  auto seal = [&](LinkGroup group, std::size_t agent, std::uint64_t index,
                  std::size_t width, const BigNat& message, const KeySet* keys,
                  const std::string& sender, const std::string& role) {
    Envelope e;
    e.message_id = next_id++;
    e.group = group;
    e.agent = agent;
    e.index = index;
    e.width = width;
    e.authenticated = signing;
    if (signing) {
      e.triple = clock.Time(role, "sign", [&] {
        return signature::AuthSend(*keys, message, index, width);
      });
      ++result.ops.signatures;
    } else {
      e.triple = {sender, message, 0, 0};
    }
    return e;
  };
  auto open = [&](const Envelope& sent, const std::optional<Envelope>& got,
                  const PublicKey* pk, const std::string& role,
                  const std::string& phase) {
    Opened out;
    if (!got) {
      out.reason = "missing";
    } else if (!signing) {
      out.flag = true;
      out.message = got->triple.z;
    } else {
      signature::VerifyOutcome v = clock.Time(role, phase, [&] {
        return signature::AuthReceive(*pk, got->triple, sent.index, sent.width);
      });
      ++result.ops.verifications;
      out.flag = v.flag;
      out.message = std::move(v.message);
      if (!v.flag) out.reason = "signature";
    }
    result.flags.push_back(
        {sent.message_id, sent.group, sent.Link(), sent.index, out.flag,
         out.reason});
    return out;
  };
  auto deliver = [&](std::vector<Envelope> batch) {
    auto got = transport.Deliver(cycle, std::move(batch));
    return got;
  };
  auto acted = [&](const Envelope& e, std::string action, std::string detail) {
    result.mitigations.push_back(
        {e.group, e.Link(), std::move(action), std::move(detail)});
  };

  // Agents: one plaintext per block, encrypted and sent to the TP.
  std::vector<Envelope> uplink;
  for (std::size_t a = 1; a <= n_agents; ++a) {
    Rng rng(DeriveSeed(config_.seed, {kEncryptStream, cycle, a}));
    const SampledCurve& curve = curve_of(a);
    const std::size_t width =
        side_of(a) == CurveKind::kSupply ? layout_.supply_width
                                         : layout_.demand_width;
    for (std::size_t b = 1; b <= layout_.n_blocks; ++b) {
      auto [first, count] = layout_.Slots(b, n_points);
      const BigNat pt = packing::Pack(
          std::span<const BigNat>(curve.values).subspan(first - 1, count),
          {width, count});
      const Ciphertext ct = clock.Time(
          "agent", "encrypt", [&] { return paillier::Encrypt(co_pk, pt, rng); });
      ++result.ops.encryptions;
      uplink.push_back(seal(LinkGroup::kAgentToTp, a, AgentIndex(b),
                            ciphertext_width_, ct.value,
                            signing ? &parties_.agents[a - 1] : nullptr,
                            AgentName(a), "agent"));
    }
  }
  const std::vector<Envelope> sent_up = uplink;
  const auto got_up = deliver(std::move(uplink));

  // TP: verify, substitute flagged inputs, aggregate per side and block.
  std::map<std::pair<std::size_t, std::size_t>, Ciphertext> inputs_ct;
  std::set<std::size_t> dropped;
  for (std::size_t k = 0; k < sent_up.size(); ++k) {
    const Envelope& e = sent_up[k];
    const std::size_t block = e.index;
    Opened o = open(e, got_up[k],
                    signing ? &parties_.agents[e.agent - 1].public_key()
                            : nullptr,
                    "tp", "verify");
    const auto key = std::make_pair(e.agent, block);
    if (o.flag) {
      Ciphertext ct{*o.message, co_pk.key_id};
      inputs_ct[key] = ct;
      history_.ciphertexts[key] = ct;
      continue;
    }
    if (alternative_) {
      if (auto ct = alternative_->RecoverCiphertext(cycle, e.agent, block)) {
        inputs_ct[key] = *ct;
        acted(e, "alternative_channel", "");
        continue;
      }
    }
    if (config_.mitigation == MitigationPolicy::kDropAgent) {
      if (dropped.insert(e.agent).second) {
        acted(e, "drop_agent", AgentName(e.agent) + " removed from cycle");
      }
      continue;
    }
    try {
      auto it = history_.ciphertexts.find(key);
      if (it == history_.ciphertexts.end()) {
        throw Error(ErrorCode::kMitigationUnavailable,
                    "no untampered ciphertext from " + AgentName(e.agent) +
                        " block " + std::to_string(block));
      }
      inputs_ct[key] = it->second;
      acted(e, std::string(Name(config_.mitigation)),
            "previous ciphertext for block " + std::to_string(block));
    } catch (const Error& err) {
      fail(err.what());
    }
  }
  result.dropped_agents = {dropped.begin(), dropped.end()};

  std::vector<CurveKind> sides;
  if (n_s > 0) sides.push_back(CurveKind::kSupply);
  sides.push_back(CurveKind::kDemand);
  Rng tp_rng(DeriveSeed(config_.seed, {kTpStream, cycle}));
  std::vector<Envelope> to_co;
  for (std::size_t b = 1; b <= layout_.n_blocks; ++b) {
    for (CurveKind side : sides) {
      std::vector<Ciphertext> cts;
      for (std::size_t a = 1; a <= n_agents; ++a) {
        if (side_of(a) != side || dropped.contains(a)) continue;
        auto it = inputs_ct.find({a, b});
        if (it != inputs_ct.end()) cts.push_back(it->second);
      }
      Ciphertext agg = clock.Time("tp", "aggregate", [&] {
        return cts.empty() ? paillier::Encrypt(co_pk, 0, tp_rng)
                           : paillier::AddCiphertexts(co_pk, cts);
      });
      if (!cts.empty()) ++result.ops.aggregations;
      to_co.push_back(seal(LinkGroup::kTpToCo, 0, TpIndex(b, side),
                           ciphertext_width_, agg.value,
                           signing ? &*parties_.third_party : nullptr, "tp",
                           "tp"));
    }
  }
  const std::vector<Envelope> sent_co = to_co;
  const auto got_co = deliver(std::move(to_co));

  // CO: verify, decrypt, cut, clear.
  result.supply = market::ZeroCurve(CurveKind::kSupply, n_points, "aggregate");
  result.demand = market::ZeroCurve(CurveKind::kDemand, n_points, "aggregate");
  for (std::size_t k = 0; k < sent_co.size(); ++k) {
    const Envelope& e = sent_co[k];
    const std::size_t block = (e.index + 1) / 2;
    const CurveKind side = e.index % 2 == 1 ? CurveKind::kSupply
                                            : CurveKind::kDemand;
    auto [first, count] = layout_.Slots(block, n_points);
    const std::size_t width = side == CurveKind::kSupply ? layout_.supply_width
                                                         : layout_.demand_width;
    Opened o = open(e, got_co[k],
                    signing ? &parties_.third_party->public_key() : nullptr,
                    "co", "verify");
    std::optional<std::vector<BigNat>> values;
    const auto hkey = std::make_pair(SideKey(side), block);
    if (o.flag) {
      try {
        BigNat pt = clock.Time("co", "decrypt", [&] {
          return paillier::Decrypt(co, Ciphertext{*o.message, co_pk.key_id});
        });
        ++result.ops.decryptions;
        if (layout_.slots_per_block == 1) {
          values = std::vector<BigNat>{pt};
        } else {
          // Cutting reads only the low width*count digits.
          pt %= packing::Pow10(width * count);
          values = packing::Unpack(pt, {width, count});
        }
        history_.aggregates[hkey] = *values;
      } catch (const Error& err) {
        fail(std::string("undecryptable aggregate: ") + err.what());
      }
    } else {
      try {
        auto it = history_.aggregates.find(hkey);
        if (it == history_.aggregates.end()) {
          throw Error(ErrorCode::kMitigationUnavailable,
                      "no untampered " + std::string(market::CurveKindName(side)) +
                          " aggregate for block " + std::to_string(block));
        }
        values = it->second;
        acted(e, "historical",
              std::string(market::CurveKindName(side)) + " aggregate for block " +
                  std::to_string(block));
      } catch (const Error& err) {
        fail(err.what());
      }
    }
    if (values) {
      SampledCurve& target =
          side == CurveKind::kSupply ? result.supply : result.demand;
      std::copy(values->begin(), values->end(),
                target.values.begin() + (first - 1));
    }
  }
  result.clearing = clock.Time("co", "clear", [&] {
    return config_.clearing == ClearingRule::kTwoSided
               ? market::ClearTwoSided(result.supply, result.demand, grid)
               : market::ClearCapacity(result.demand, config_.capacity,
                                       inputs.base_price_index, grid);
  });
  result.price_units = grid.PriceUnits(result.clearing.index);

  // Price broadcast and agent-side fallback.
  std::vector<Envelope> down;
  for (std::size_t a = 1; a <= n_agents; ++a) {
    Envelope e = seal(LinkGroup::kCoToAgent, a, PriceIndex(a), price_width_,
                      result.price_units, &co, "co", "co");
    down.push_back(std::move(e));
  }
  const std::vector<Envelope> sent_down = down;
  const auto got_down = deliver(std::move(down));
  result.agent_prices.resize(n_agents);
  const std::size_t keep = std::max<std::size_t>(config_.price_history, 1);
  for (std::size_t k = 0; k < sent_down.size(); ++k) {
    const Envelope& e = sent_down[k];
    Opened o = open(e, got_down[k], &co_pk, "agent", "verify_price");
    std::deque<BigNat>& past = history_.prices[e.agent];
    if (o.flag) {
      result.agent_prices[e.agent - 1] = *o.message;
      past.push_back(*o.message);
      while (past.size() > keep) past.pop_front();
      continue;
    }
    try {
      if (past.empty()) {
        throw Error(ErrorCode::kMitigationUnavailable,
                    "no untampered price at " + AgentName(e.agent));
      }
      if (config_.mitigation == MitigationPolicy::kHistorical) {
        BigNat sum = 0;
        for (const BigNat& p : past) sum += p;
        const BigNat n(static_cast<unsigned long>(past.size()));
        result.agent_prices[e.agent - 1] = (2 * sum + n) / (2 * n);
        acted(e, "historical",
              "mean of last " + std::to_string(past.size()) + " prices");
      } else {
        result.agent_prices[e.agent - 1] = past.back();
        acted(e, "last_good", "previous price");
      }
    } catch (const Error& err) {
      fail(err.what());
    }
  }
  result.timing = clock.Records();
  return result;
}

ClearingResult RunAuctionPointwise(ProtocolConfig config,
                                   const CycleInputs& inputs,
                                   Transport& transport) {
  config.block_mode = false;
  AuctionSession session(std::move(config));
  return session.RunCycle(1, inputs, transport);
}

ClearingResult RunAuctionBlock(ProtocolConfig config, const CycleInputs& inputs,
                               Transport& transport) {
  config.block_mode = true;
  AuctionSession session(std::move(config));
  return session.RunCycle(1, inputs, transport);
}

}  // namespace ptes::protocol
