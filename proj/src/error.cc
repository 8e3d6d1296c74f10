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

#include "ptes/error.h"

namespace ptes {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNoInverse: return "NoInverse";
    case ErrorCode::kBoundUnsatisfiable: return "BoundUnsatisfiable";
    case ErrorCode::kInvalidKey: return "InvalidKey";
    case ErrorCode::kPlaintextOutOfRange: return "PlaintextOutOfRange";
    case ErrorCode::kCiphertextOutOfRange: return "CiphertextOutOfRange";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kEmptyAggregation: return "EmptyAggregation";
    case ErrorCode::kSlotOverflow: return "SlotOverflow";
    case ErrorCode::kIndexError: return "IndexError";
    case ErrorCode::kSpecMismatch: return "SpecMismatch";
    case ErrorCode::kUnsignableMessage: return "UnsignableMessage";
    case ErrorCode::kMessageOutOfRange: return "MessageOutOfRange";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kBoundViolation: return "BoundViolation";
    case ErrorCode::kMitigationUnavailable: return "MitigationUnavailable";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ptes
