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

// Per-role timing of pointwise against block mode across key lengths.

#ifndef PTES_BENCH_H_
#define PTES_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ptes/simulator.h"

namespace ptes::bench {

struct BenchOptions {
  std::vector<unsigned long> bits = {512, 1024, 2048};
  std::vector<std::string> modes = {"pointwise", "block"};
  std::size_t agents = 100;
  std::size_t points = 101;
  std::size_t cycles = 1;
  // Block cycles are cheap; more of them steadies the average.
  std::size_t block_cycles = 5;
  bool signing = false;
  std::uint64_t seed = 1;
};

// One cell per (bits, mode), run sequentially. Throws kConfigError for an
// unknown mode or empty bits list.
std::vector<simulator::BenchRecord> RunBench(
    const BenchOptions& options,
    const std::function<void(const std::string&)>& progress = {});

struct RoleRatio {
  unsigned long key_bits = 0;
  std::string role;
  double pointwise_over_block = 0;
};

std::vector<RoleRatio> Ratios(const std::vector<simulator::BenchRecord>& records);

}  // namespace ptes::bench

#endif  // PTES_BENCH_H_
