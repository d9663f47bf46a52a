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

#include "bhadra/validation.hpp"

#include <algorithm>

#include "json_support.hpp"

namespace bhadra {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kArgument: return "ARGUMENT_ERROR";
    case ErrorCode::kVersion: return "VERSION_MISMATCH";
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kConflict: return "CONFLICT";
    case ErrorCode::kUndefined: return "UNDEFINED";
  }
  return "UNKNOWN";
}

std::string_view to_string(FindingSeverity severity) {
  return severity == FindingSeverity::kError ? "Error" : "Warning";
}

std::string_view to_string(ReportStatus status) { return status == ReportStatus::kValid ? "Valid" : "Invalid"; }

void ValidationReport::error(std::string code, std::string subject, std::string message) {
  findings_.push_back({std::move(code), FindingSeverity::kError, std::move(subject), std::move(message)});
}

void ValidationReport::warning(std::string code, std::string subject, std::string message) {
  findings_.push_back({std::move(code), FindingSeverity::kWarning, std::move(subject), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  findings_.insert(findings_.end(), other.findings_.begin(), other.findings_.end());
}

ReportStatus ValidationReport::status() const {
  return error_count() == 0 ? ReportStatus::kValid : ReportStatus::kInvalid;
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings_.begin(), findings_.end(), [](const Finding& f) {
    return f.severity == FindingSeverity::kError;
  }));
}

std::size_t ValidationReport::warning_count() const { return findings_.size() - error_count(); }

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(findings_.begin(), findings_.end(), [&](const Finding& f) { return f.code == code; });
}

bool ValidationReport::has(std::string_view code, std::string_view subject) const {
  return std::any_of(findings_.begin(), findings_.end(),
                     [&](const Finding& f) { return f.code == code && f.subject == subject; });
}

nlohmann::ordered_json report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["status"] = to_string(report.status());
  auto findings = nlohmann::ordered_json::array();
  for (const auto& f : report.findings()) {
    nlohmann::ordered_json j;
    j["code"] = f.code;
    j["severity"] = to_string(f.severity);
    j["subject"] = f.subject;
    j["message"] = f.message;
    findings.push_back(std::move(j));
  }
  doc["findings"] = std::move(findings);
  return doc;
}

ValidationReport report_from_json(const nlohmann::ordered_json& root) {
  const detail::OrderedField doc = detail::OrderedField(root, "").object();
  const detail::OrderedField list = doc.at("findings");
  ValidationReport report;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const detail::OrderedField item = list.index(i).object();
    Finding finding;
    finding.code = item.string_at("code");
    const auto severity = item.string_at("severity");
    if (severity == "Error") {
      finding.severity = FindingSeverity::kError;
    } else if (severity == "Warning") {
      finding.severity = FindingSeverity::kWarning;
    } else {
      item.at("severity").fail("severity must be Error or Warning");
    }
    finding.subject = item.string_or("subject", "");
    finding.message = item.string_or("message", "");
    report.add(std::move(finding));
  }
  return report;
}

}  // namespace bhadra
