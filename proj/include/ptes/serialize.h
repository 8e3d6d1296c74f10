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

// JSON forms of keys, signed triples, grids, curves, protocol configs and
// clearing results. Big integers are written as decimal strings.

#ifndef PTES_SERIALIZE_H_
#define PTES_SERIALIZE_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ptes/market.h"
#include "ptes/paillier.h"
#include "ptes/protocol.h"
#include "ptes/signature.h"

namespace ptes::io {

using Json = nlohmann::ordered_json;

// Parses text, reporting syntax errors as kConfigError with
// "<source>:<line>:<column>".
Json ParseJson(std::string_view text, std::string_view source);
// Throws kIoError when the file cannot be read.
Json ReadJsonFile(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);
// Throws kIoError when the file cannot be written.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Strict reader for one JSON object: every key must be consumed, and type
// errors name the offending path. Throws kConfigError.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string path);
  ~ObjectReader() = default;

  bool Has(const std::string& key) const { return object_.contains(key); }
  const Json& Raw(const std::string& key);

  template <typename T>
  void Read(const std::string& key, T& out) {
    if (!Has(key)) return;
    try {
      out = Raw(key).template get<T>();
    } catch (const nlohmann::json::exception&) {
      Fail(key, "has the wrong type");
    }
  }
  std::string Path(const std::string& key) const { return path_ + "." + key; }
  [[noreturn]] void Fail(const std::string& key, const std::string& why) const;
  // Throws if any key was never looked at.
  void Finish() const;

 private:
  const Json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

BigNat BigNatFromJson(const Json& j, const std::string& path);
Json ToJson(const BigNat& x);

Json ToJson(const paillier::PublicKey& pk);
Json PrivateKeyToJson(const paillier::KeySet& keys);
paillier::PublicKey PublicKeyFromJson(const Json& j);
// Rebuilds and revalidates the full key set (kInvalidKey on bad material).
paillier::KeySet KeySetFromJson(const Json& j);

Json ToJson(const signature::SignedTriple& t);
signature::SignedTriple TripleFromJson(const Json& j);

Json ToJson(const market::PriceGrid& grid);
market::PriceGrid GridFromJson(const Json& j, const std::string& path = "grid");

Json ToJson(const market::SampledCurve& curve, const market::PriceGrid& grid);
// Throws kGridMismatch when the embedded grid does not match `grid`.
market::SampledCurve CurveFromJson(const Json& j, const market::PriceGrid& grid);

Json ToJson(const protocol::ProtocolConfig& config);
protocol::ProtocolConfig ProtocolConfigFromJson(
    const Json& j, const std::string& path = "protocol");

Json ToJson(const protocol::ClearingResult& result, bool include_timing = true);

}  // namespace ptes::io

#endif  // PTES_SERIALIZE_H_
