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

#include "kcfg/error.hpp"

namespace kcfg {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kUnterminatedComment: return "UnterminatedComment";
    case ErrorCode::kUnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::kUnexpectedCharacter: return "UnexpectedCharacter";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kFeatureOrderMismatch: return "FeatureOrderMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kGeneratorNotFound: return "GeneratorNotFound";
    case ErrorCode::kCompilerNotFound: return "CompilerNotFound";
    case ErrorCode::kLedgerCorrupt: return "LedgerCorrupt";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(errorCodeName(code));
  if (line != 0) out += " at line " + std::to_string(line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace kcfg
