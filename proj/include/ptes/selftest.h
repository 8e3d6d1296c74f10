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

// Property suites runnable from the command line on any build.

#ifndef PTES_SELFTEST_H_
#define PTES_SELFTEST_H_

#include <string>
#include <vector>

namespace ptes::selftest {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;  // checks run, or the first failure
};

std::vector<std::string> SuiteNames();
std::vector<SuiteResult> RunAll();

}  // namespace ptes::selftest

#endif  // PTES_SELFTEST_H_
