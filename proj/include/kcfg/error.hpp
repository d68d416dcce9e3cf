// Copyright 2026 The kcfg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kcfg {

enum class ErrorCode {
  kUnknownFeature,
  kUnterminatedComment,
  kUnterminatedLiteral,
  kUnexpectedCharacter,
  kEmptyCorpus,
  kFormatVersionMismatch,
  kFeatureOrderMismatch,
  kParseError,
  kDegenerateData,
  kInvalidArgument,
  kGeneratorNotFound,
  kCompilerNotFound,
  kLedgerCorrupt,
  kIo,
};

std::string_view errorCodeName(ErrorCode code);

// All toolkit failures surface as this exception. `line` is 1-based and 0
// when the error is not tied to a position in some input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace kcfg
