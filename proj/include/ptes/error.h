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

#ifndef PTES_ERROR_H_
#define PTES_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptes {

enum class ErrorCode {
  kDomainError,
  kNoInverse,
  kBoundUnsatisfiable,
  kInvalidKey,
  kPlaintextOutOfRange,
  kCiphertextOutOfRange,
  kKeyMismatch,
  kEmptyAggregation,
  kSlotOverflow,
  kIndexError,
  kSpecMismatch,
  kUnsignableMessage,
  kMessageOutOfRange,
  kKindMismatch,
  kGridMismatch,
  kBoundViolation,
  kMitigationUnavailable,
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ptes

#endif  // PTES_ERROR_H_
