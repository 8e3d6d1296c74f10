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

// ptes: key generation, scenario runs, benchmarks and self-tests.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptes/bench.h"
#include "ptes/error.h"
#include "ptes/paillier.h"
#include "ptes/selftest.h"
#include "ptes/serialize.h"
#include "ptes/simulator.h"

namespace {

using ptes::Error;
using ptes::ErrorCode;

constexpr unsigned long kMinCliBits = 128;

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::uint64_t DefaultSeed() {
  const char* env = std::getenv("PTES_SEED");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(env, &used);
    if (used == std::string(env).size()) return seed;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfigError,
              std::string("PTES_SEED is not an integer: '") + env + "'");
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

struct KeygenArgs {
  unsigned long bits = 1024;
  std::string out;
  std::string id = "key";
  bool random_generator = false;
  std::optional<std::uint64_t> seed;
};

int Keygen(const KeygenArgs& a) {
  if (a.bits < kMinCliBits) {
    std::cerr << "ptes keygen: --bits must be at least " << kMinCliBits
              << "\n";
    return kExitUsage;
  }
  ptes::Rng rng(a.seed.value_or(DefaultSeed()));
  const ptes::paillier::KeySet keys = ptes::paillier::Keygen(
      a.bits, 1, rng,
      {.key_id = a.id,
       .generator = a.random_generator
                        ? ptes::paillier::GeneratorChoice::kRandom
                        : ptes::paillier::GeneratorChoice::kAlphaPlusOne});
  const std::string pub = a.out + ".pub.json";
  const std::string priv = a.out + ".key.json";
  ptes::io::WriteTextFile(pub, ptes::io::ToJson(keys.public_key()).dump(2) + "\n");
  ptes::io::WriteTextFile(priv, ptes::io::PrivateKeyToJson(keys).dump(2) + "\n");
  std::cout << "wrote " << pub << " and " << priv << " (" << keys.bits()
            << "-bit modulus)\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string attacks = "none";
  std::optional<std::size_t> cycles;
  std::string report = "report.json";
  std::string transcript;
  std::string timing_csv;
  std::optional<std::uint64_t> seed;
};

ptes::simulator::AttackScenario LoadAttacks(const std::string& spec,
                                            std::uint64_t seed) {
  if (std::filesystem::exists(spec)) {
    return ptes::simulator::AttackScenarioFromJson(ptes::io::ReadJsonFile(spec));
  }
  ptes::simulator::AttackScenario s = ptes::simulator::AttackPreset(spec);
  s.seed = seed;
  return s;
}

std::string Rate(std::optional<double> r) {
  return r ? std::to_string(*r) : std::string("n/a");
}

int Run(const RunArgs& a) {
  ptes::simulator::ScenarioConfig config =
      a.config.empty() ? ptes::simulator::ScenarioConfig::Default()
                       : ptes::simulator::ScenarioConfigFromJson(
                             ptes::io::ReadJsonFile(a.config));
  if (a.seed) {
    config.protocol.seed = *a.seed;
  } else if (std::getenv("PTES_SEED")) {
    config.protocol.seed = DefaultSeed();
  }
  if (a.cycles) config.cycles = *a.cycles;
  const auto attacks = LoadAttacks(a.attacks, config.protocol.seed);

  const ptes::simulator::ScenarioReport report = ptes::simulator::RunScenario(
      config, attacks, {.keep_transcript = !a.transcript.empty()});
  ptes::io::WriteTextFile(a.report, ToJson(report).dump(2) + "\n");
  if (!a.transcript.empty()) {
    std::ofstream out = OpenOut(a.transcript);
    ptes::simulator::WriteTranscript(report, out);
  }
  if (!a.timing_csv.empty()) {
    std::ofstream out = OpenOut(a.timing_csv);
    ptes::simulator::WriteBenchCsv(ptes::simulator::RoleTimes(report), out);
  }

  std::size_t off_baseline = 0;
  for (const auto& c : report.cycles) off_baseline += !c.matches_baseline;
  std::cout << "cycles: " << report.cycles.size()
            << "  failed: " << report.failed_cycles
            << "  off baseline: " << off_baseline << "\n"
            << "attacked messages: " << report.detection.attacked
            << "  detection rate: " << Rate(report.detection.detection_rate())
            << "\n"
            << "clean messages: " << report.detection.clean
            << "  false-alarm rate: "
            << Rate(report.detection.false_alarm_rate()) << "\n"
            << "report: " << a.report << "\n";
  return report.failed_cycles == 0 ? 0 : kExitFailed;
}

struct BenchArgs {
  ptes::bench::BenchOptions options;
  std::string out = "bench.csv";
  std::optional<std::uint64_t> seed;
};

int Bench(BenchArgs a) {
  a.options.seed = a.seed.value_or(DefaultSeed());
  const auto records = ptes::bench::RunBench(
      a.options, [](const std::string& s) { std::cerr << "bench: " << s << "\n"; });
  {
    std::ofstream out = OpenOut(a.out);
    ptes::simulator::WriteBenchCsv(records, out);
  }
  ptes::simulator::WriteBenchCsv(records, std::cout);
  for (const auto& r : ptes::bench::Ratios(records)) {
    std::cout << "ratio " << r.key_bits << " " << r.role
              << " pointwise/block = " << r.pointwise_over_block << "\n";
  }
  return 0;
}

int Selftest(bool list_only) {
  if (list_only) {
    for (const std::string& n : ptes::selftest::SuiteNames()) std::cout << n << "\n";
    return 0;
  }
  std::vector<std::string> failing;
  for (const auto& r : ptes::selftest::RunAll()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail
              << ")\n";
    if (!r.passed) failing.push_back(r.name);
  }
  if (failing.empty()) return 0;
  std::cerr << "failing suites:";
  for (const auto& n : failing) std::cerr << " " << n;
  std::cerr << "\n";
  return kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving transactive energy auction toolkit"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* kg = app.add_subcommand("keygen", "Generate a Paillier key pair");
  kg->add_option("--bits", keygen.bits, "Modulus bit length (>= 128)");
  kg->add_option("--out", keygen.out, "Output prefix for .pub.json/.key.json")
      ->required();
  kg->add_option("--id", keygen.id, "Key identifier");
  kg->add_flag("--random-generator", keygen.random_generator,
               "Draw a random generator instead of alpha + 1");
  kg->add_option("--seed", keygen.seed, "RNG seed (default: $PTES_SEED or 1)");

  RunArgs run;
  auto* rn = app.add_subcommand("run", "Run a multi-cycle market scenario");
  rn->add_option("--config", run.config, "Scenario JSON")->check(CLI::ExistingFile);
  rn->add_option("--attacks", run.attacks,
                 "Attack preset (none, half-cycle-N, mixed-cycle-N) or JSON file");
  rn->add_option("--cycles", run.cycles, "Number of market cycles");
  rn->add_option("--report", run.report, "Report JSON path");
  rn->add_option("--transcript", run.transcript, "Line-delimited transcript path");
  rn->add_option("--timing-csv", run.timing_csv, "Per-role timing CSV path");
  rn->add_option("--seed", run.seed, "Scenario seed (default: $PTES_SEED, then config)");

  BenchArgs bench;
  auto* bn = app.add_subcommand("bench", "Time pointwise against block mode");
  bn->add_option("--bits-list", bench.options.bits, "Key lengths")
      ->delimiter(',');
  bn->add_option("--modes", bench.options.modes, "pointwise,block")
      ->delimiter(',');
  bn->add_option("--agents", bench.options.agents, "Customers per market");
  bn->add_option("--points", bench.options.points, "Price grid points");
  bn->add_option("--cycles", bench.options.cycles, "Pointwise cycles per cell");
  bn->add_option("--block-cycles", bench.options.block_cycles,
                 "Block cycles per cell (0: same as --cycles)");
  bn->add_flag("--signing", bench.options.signing, "Sign every link");
  bn->add_option("--out", bench.out, "CSV path");
  bn->add_option("--seed", bench.seed, "Seed (default: $PTES_SEED or 1)");

  bool list_suites = false;
  auto* st = app.add_subcommand("selftest", "Run the built-in property suites");
  st->add_flag("--list", list_suites, "Only list suite names");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*kg) return Keygen(keygen);
    if (*rn) return Run(run);
    if (*bn) return Bench(bench);
    if (*st) return Selftest(list_suites);
  } catch (const Error& e) {
    std::cerr << "ptes: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfigError ? kExitUsage : kExitFailed;
  }
  return kExitUsage;
}
