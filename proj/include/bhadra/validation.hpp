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
#include <vector>

#include "bhadra/error.hpp"
#include "json.hpp"

namespace bhadra {

enum class FindingSeverity { kError, kWarning };

struct Finding {
  std::string code;
  FindingSeverity severity = FindingSeverity::kError;
  std::string subject;
  std::string message;

  bool operator==(const Finding&) const = default;
};

enum class ReportStatus { kValid, kInvalid };

/// Structured outcome of taxonomy, model and capability checks. The status is
/// derived: Valid iff no Error-severity finding is present.
class ValidationReport {
 public:
  ValidationReport() = default;
  explicit ValidationReport(std::vector<Finding> findings) : findings_(std::move(findings)) {}

  void error(std::string code, std::string subject, std::string message);
  void warning(std::string code, std::string subject, std::string message);
  void add(Finding finding) { findings_.push_back(std::move(finding)); }
  void merge(const ValidationReport& other);

  ReportStatus status() const;
  bool valid() const { return status() == ReportStatus::kValid; }
  bool empty() const { return findings_.empty(); }

  const std::vector<Finding>& findings() const { return findings_; }
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool has(std::string_view code) const;
  bool has(std::string_view code, std::string_view subject) const;

  bool operator==(const ValidationReport&) const = default;

 private:
  std::vector<Finding> findings_;
};

std::string_view to_string(FindingSeverity severity);
std::string_view to_string(ReportStatus status);

/// {"status", "findings": [{"code", "severity", "subject", "message"}]}
nlohmann::ordered_json report_to_json(const ValidationReport& report);
/// Throws Error{kParse}.
ValidationReport report_from_json(const nlohmann::ordered_json& doc);

/// Thrown by operations that refuse input carrying Error findings.
class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(ValidationReport report, const std::string& what = "validation failed")
      : std::runtime_error(what), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace bhadra
