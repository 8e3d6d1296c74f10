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

#include "ptes/bench.h"

#include <map>

#include "ptes/error.h"

namespace ptes::bench {

std::vector<simulator::BenchRecord> RunBench(
    const BenchOptions& options,
    const std::function<void(const std::string&)>& progress) {
  if (options.bits.empty()) {
    throw Error(ErrorCode::kConfigError, "bench needs at least one key length");
  }
  for (const std::string& mode : options.modes) {
    if (mode != "pointwise" && mode != "block") {
      throw Error(ErrorCode::kConfigError, "unknown mode '" + mode + "'");
    }
  }
  std::vector<simulator::BenchRecord> out;
  for (unsigned long bits : options.bits) {
    for (const std::string& mode : options.modes) {
      simulator::ScenarioConfig c = simulator::ScenarioConfig::Default();
      c.protocol.grid = market::PriceGrid::WithPoints(options.points, 0.0, 0.01);
      c.protocol.n_customers = options.agents;
      c.protocol.key_bits = bits;
      c.protocol.block_mode = mode == "block";
      c.protocol.allow_block_split = true;
      c.protocol.signing_enabled = options.signing;
      c.protocol.seed = options.seed;
      c.cycles = mode == "block" && options.block_cycles > 0
                     ? options.block_cycles
                     : options.cycles;
      if (progress) {
        progress(std::to_string(bits) + " bits, " + mode + ", " +
                 std::to_string(c.cycles) + " cycle(s)");
      }
      const simulator::ScenarioReport report =
          simulator::RunScenario(c, simulator::AttackScenario{});
      for (const simulator::BenchRecord& r : simulator::RoleTimes(report)) {
        out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<RoleRatio> Ratios(
    const std::vector<simulator::BenchRecord>& records) {
  std::map<std::pair<unsigned long, std::string>, std::pair<double, double>> cells;
  std::vector<std::pair<unsigned long, std::string>> order;
  for (const simulator::BenchRecord& r : records) {
    auto key = std::make_pair(r.key_bits, r.role);
    if (!cells.contains(key)) order.push_back(key);
    auto& [pw, bl] = cells[key];
    (r.mode == "block" ? bl : pw) = r.seconds_per_cycle;
  }
  std::vector<RoleRatio> out;
  for (const auto& key : order) {
    const auto& [pw, bl] = cells[key];
    if (pw > 0 && bl > 0) out.push_back({key.first, key.second, pw / bl});
  }
  return out;
}

}  // namespace ptes::bench
