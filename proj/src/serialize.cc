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

#include "ptes/serialize.h"

#include <fstream>
#include <sstream>

#include "ptes/error.h"

namespace ptes::io {
namespace {

Json Strings(const std::vector<BigNat>& values) {
  Json out = Json::array();
  for (const BigNat& v : values) out.push_back(ToDecimal(v));
  return out;
}

std::string KeyString(ObjectReader& r, const std::string& key) {
  std::string out;
  if (!r.Has(key)) r.Fail(key, "is missing");
  r.Read(key, out);
  return out;
}

BigNat KeyBigNat(ObjectReader& r, const std::string& key) {
  if (!r.Has(key)) r.Fail(key, "is missing");
  return BigNatFromJson(r.Raw(key), r.Path(key));
}

}  // namespace

Json ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size() + 1);
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) {
      what = what.substr(pos);
    }
    throw Error(ErrorCode::kConfigError, std::string(source) + ":" +
                                             std::to_string(line) + ":" +
                                             std::to_string(column) + ": " +
                                             what);
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ReadJsonFile(const std::filesystem::path& path) {
  return ParseJson(ReadTextFile(path), path.string());
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out.flush()) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

ObjectReader::ObjectReader(const Json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) {
    throw Error(ErrorCode::kConfigError, path_ + " must be an object");
  }
}

const Json& ObjectReader::Raw(const std::string& key) {
  seen_.insert(key);
  return object_.at(key);
}

void ObjectReader::Fail(const std::string& key, const std::string& why) const {
  throw Error(ErrorCode::kConfigError, Path(key) + " " + why);
}

void ObjectReader::Finish() const {
  for (const auto& [key, value] : object_.items()) {
    if (!seen_.contains(key)) Fail(key, "is not a known setting");
  }
}

BigNat BigNatFromJson(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return BigNat(j.get<unsigned long>());
  if (!j.is_string()) {
    throw Error(ErrorCode::kConfigError, path + " must be a decimal string");
  }
  try {
    return BigNatFromString(j.get<std::string>());
  } catch (const Error&) {
    throw Error(ErrorCode::kConfigError, path + " must be a decimal string");
  }
}

Json ToJson(const BigNat& x) { return ToDecimal(x); }

Json ToJson(const paillier::PublicKey& pk) {
  return Json{{"key_id", pk.key_id},
              {"bits", pk.bits},
              {"alpha", ToDecimal(pk.alpha)},
              {"beta", ToDecimal(pk.beta)}};
}

Json PrivateKeyToJson(const paillier::KeySet& keys) {
  return Json{{"key_id", keys.key_id()},
              {"bits", keys.bits()},
              {"p", ToDecimal(keys.p())},
              {"q", ToDecimal(keys.q())},
              {"beta", ToDecimal(keys.beta())}};
}

paillier::PublicKey PublicKeyFromJson(const Json& j) {
  ObjectReader r(j, "public_key");
  const std::string id = KeyString(r, "key_id");
  const BigNat alpha = KeyBigNat(r, "alpha");
  const BigNat beta = KeyBigNat(r, "beta");
  unsigned long bits = 0;
  r.Read("bits", bits);
  r.Finish();
  paillier::PublicKey pk = paillier::PublicKey::Make(id, alpha, beta);
  if (bits != 0 && bits != pk.bits) r.Fail("bits", "disagrees with alpha");
  return pk;
}

paillier::KeySet KeySetFromJson(const Json& j) {
  ObjectReader r(j, "private_key");
  const std::string id = KeyString(r, "key_id");
  const BigNat p = KeyBigNat(r, "p");
  const BigNat q = KeyBigNat(r, "q");
  const BigNat beta = KeyBigNat(r, "beta");
  unsigned long bits = 0;
  r.Read("bits", bits);
  r.Finish();
  paillier::KeySet keys = paillier::KeySet::FromComponents(id, p, q, beta);
  if (bits != 0 && bits != keys.bits()) r.Fail("bits", "disagrees with p*q");
  return keys;
}

Json ToJson(const signature::SignedTriple& t) {
  return Json{{"signer", t.signer_id},
              {"z", ToDecimal(t.z)},
              {"s1", ToDecimal(t.s1)},
              {"s2", ToDecimal(t.s2)}};
}

signature::SignedTriple TripleFromJson(const Json& j) {
  ObjectReader r(j, "triple");
  signature::SignedTriple t;
  t.signer_id = KeyString(r, "signer");
  t.z = KeyBigNat(r, "z");
  t.s1 = KeyBigNat(r, "s1");
  t.s2 = KeyBigNat(r, "s2");
  r.Finish();
  return t;
}

Json ToJson(const market::PriceGrid& grid) {
  return Json{{"lambda_min", grid.lambda_min()},
              {"lambda_max", grid.lambda_max()},
              {"tau", grid.tau()},
              {"n_points", grid.n_points()},
              {"sigma", grid.sigma()},
              {"sigma_lambda", grid.sigma_lambda()}};
}

market::PriceGrid GridFromJson(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  market::PriceGrid def;
  double lambda_min = def.lambda_min(), lambda_max = def.lambda_max(),
         tau = def.tau();
  int sigma = def.sigma(), sigma_lambda = def.sigma_lambda();
  std::size_t n_points = 0;
  r.Read("lambda_min", lambda_min);
  r.Read("lambda_max", lambda_max);
  r.Read("tau", tau);
  r.Read("sigma", sigma);
  r.Read("sigma_lambda", sigma_lambda);
  r.Read("n_points", n_points);
  r.Finish();
  try {
    if (n_points != 0 && !r.Has("lambda_max")) {
      return market::PriceGrid::WithPoints(n_points, lambda_min, tau, sigma,
                                           sigma_lambda);
    }
    market::PriceGrid grid(lambda_min, lambda_max, tau, sigma, sigma_lambda);
    if (n_points != 0 && n_points != grid.n_points()) {
      r.Fail("n_points", "disagrees with lambda range and tau (" +
                             std::to_string(grid.n_points()) + ")");
    }
    return grid;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, path + ": " + e.what());
  }
}

Json ToJson(const market::SampledCurve& curve, const market::PriceGrid& grid) {
  return Json{{"kind", market::CurveKindName(curve.kind)},
              {"owner", curve.owner_id},
              {"grid", ToJson(grid)},
              {"values", Strings(curve.values)}};
}

market::SampledCurve CurveFromJson(const Json& j,
                                   const market::PriceGrid& grid) {
  ObjectReader r(j, "curve");
  market::SampledCurve curve;
  curve.kind = market::ParseCurveKind(KeyString(r, "kind"));
  r.Read("owner", curve.owner_id);
  if (r.Has("grid") && GridFromJson(r.Raw("grid"), "curve.grid") != grid) {
    throw Error(ErrorCode::kGridMismatch, "curve was sampled on another grid");
  }
  if (!r.Has("values") || !r.Raw("values").is_array()) {
    r.Fail("values", "must be an array");
  }
  const Json& values = r.Raw("values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    curve.values.push_back(
        BigNatFromJson(values[i], r.Path("values") + "[" + std::to_string(i) + "]"));
  }
  r.Finish();
  if (curve.values.size() != grid.n_points()) {
    throw Error(ErrorCode::kGridMismatch, "curve length differs from grid");
  }
  return curve;
}

Json ToJson(const protocol::ProtocolConfig& c) {
  return Json{{"grid", ToJson(c.grid)},
              {"n_suppliers", c.n_suppliers},
              {"n_customers", c.n_customers},
              {"delta_s", c.delta_s},
              {"delta_d", c.delta_d},
              {"key_bits", c.key_bits},
              {"block_mode", c.block_mode},
              {"allow_block_split", c.allow_block_split},
              {"signing_enabled", c.signing_enabled},
              {"mitigation", protocol::Name(c.mitigation)},
              {"price_history", c.price_history},
              {"clearing", protocol::Name(c.clearing)},
              {"capacity", c.capacity},
              {"seed", c.seed}};
}

protocol::ProtocolConfig ProtocolConfigFromJson(const Json& j,
                                                const std::string& path) {
  ObjectReader r(j, path);
  protocol::ProtocolConfig c;
  if (r.Has("grid")) c.grid = GridFromJson(r.Raw("grid"), r.Path("grid"));
  r.Read("n_suppliers", c.n_suppliers);
  r.Read("n_customers", c.n_customers);
  r.Read("delta_s", c.delta_s);
  r.Read("delta_d", c.delta_d);
  r.Read("key_bits", c.key_bits);
  r.Read("block_mode", c.block_mode);
  r.Read("allow_block_split", c.allow_block_split);
  r.Read("signing_enabled", c.signing_enabled);
  r.Read("price_history", c.price_history);
  r.Read("capacity", c.capacity);
  r.Read("seed", c.seed);
  std::string name;
  if (r.Has("mitigation")) {
    r.Read("mitigation", name);
    c.mitigation = protocol::ParseMitigationPolicy(name);
  }
  if (r.Has("clearing")) {
    r.Read("clearing", name);
    c.clearing = protocol::ParseClearingRule(name);
  }
  r.Finish();
  if (!(c.delta_s > 0) || !(c.delta_d > 0)) {
    r.Fail("delta_d", "and delta_s must be positive");
  }
  return c;
}

Json ToJson(const protocol::ClearingResult& result, bool include_timing) {
  Json flags = Json::array();
  for (const protocol::LinkFlag& f : result.flags) {
    Json entry{{"message_id", f.message_id},
               {"group", protocol::Name(f.group)},
               {"link", f.link},
               {"index", f.index},
               {"flag", f.flag ? 1 : 0}};
    if (!f.reason.empty()) entry["reason"] = f.reason;
    flags.push_back(std::move(entry));
  }
  Json mitigations = Json::array();
  for (const protocol::MitigationAction& m : result.mitigations) {
    mitigations.push_back({{"group", protocol::Name(m.group)},
                           {"link", m.link},
                           {"action", m.action},
                           {"detail", m.detail}});
  }
  Json prices = Json::array();
  for (const auto& p : result.agent_prices) {
    prices.push_back(p ? Json(ToDecimal(*p)) : Json(nullptr));
  }
  Json out{
      {"cycle", result.cycle},
      {"lambda_star", result.clearing.lambda_star},
      {"index", result.clearing.index},
      {"price_units", ToDecimal(result.price_units)},
      {"exact_match", result.clearing.exact},
      {"capacity_infeasible", result.clearing.capacity_infeasible},
      {"supply", Strings(result.supply.values)},
      {"demand", Strings(result.demand.values)},
      {"flags", std::move(flags)},
      {"mitigations", std::move(mitigations)},
      {"dropped_agents", result.dropped_agents},
      {"agent_prices", std::move(prices)},
      {"failed", result.failed},
      {"failures", result.failures},
      {"ops",
       {{"encryptions", result.ops.encryptions},
        {"aggregations", result.ops.aggregations},
        {"decryptions", result.ops.decryptions},
        {"signatures", result.ops.signatures},
        {"verifications", result.ops.verifications}}},
  };
  if (include_timing) {
    Json timing = Json::array();
    for (const protocol::TimingRecord& t : result.timing) {
      timing.push_back(
          {{"role", t.role}, {"phase", t.phase}, {"seconds", t.seconds}});
    }
    out["timing"] = std::move(timing);
  }
  return out;
}

}  // namespace ptes::io
