// Copyright 2026 The Bhadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bhadra {

enum class ErrorCode {
  kParse,      ///< malformed document; locus() names the line or field
  kNotFound,   ///< unknown tactic, technique or model id
  kArgument,   ///< precondition on an argument violated
  kVersion,    ///< taxonomy versions disagree
  kIo,         ///< filesystem failure
  kConflict,   ///< optimistic-concurrency precondition failed
  kUndefined,  ///< result undefined for the inputs (e.g. similarity of two empty sets)
};

std::string_view to_string(ErrorCode code);

/// Exception type for every failure that is not a validation finding.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string locus = {})
      : std::runtime_error(locus.empty() ? message : locus + ": " + message),
        code_(code),
        locus_(std::move(locus)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& locus() const noexcept { return locus_; }

 private:
  ErrorCode code_;
  std::string locus_;
};

}  // namespace bhadra
