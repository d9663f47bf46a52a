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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bhadra/taxonomy.hpp"
#include "bhadra/timestamp.hpp"
#include "bhadra/validation.hpp"
#include "json.hpp"

namespace bhadra {

enum class Confidence { kConfirmed, kSuspected };
enum class ModelStatus { kDraft, kFinal };

std::string_view to_string(Confidence confidence);
std::string_view to_string(ModelStatus status);
std::optional<Confidence> parse_confidence(std::string_view text);
std::optional<ModelStatus> parse_model_status(std::string_view text);

struct TechniqueTag {
  std::string technique;
  std::string evidence;
  Confidence confidence = Confidence::kConfirmed;

  bool operator==(const TechniqueTag&) const = default;
};

/// One modeled attack. A value type: every mutator below returns a new model.
struct AttackModel {
  std::string id;
  std::string title;
  std::string summary;
  std::set<AdversaryClass> adversary;
  std::string taxonomy_version;
  std::vector<TechniqueTag> tags;
  std::vector<std::string> sources;
  Timestamp created;
  Timestamp modified;
  ModelStatus status = ModelStatus::kDraft;
  /// Fields this version does not know about, kept verbatim for round-trips.
  nlohmann::ordered_json extensions = nlohmann::ordered_json::object();

  const TechniqueTag* find_tag(std::string_view technique_id) const;
  std::set<std::string> technique_ids() const;

  bool operator==(const AttackModel&) const = default;
};

/// Lowercase ASCII slug of a title ("Billing fraud 1" -> "billing-fraud-1").
std::string slugify(std::string_view title);
bool is_valid_model_id(std::string_view id);

/// New Draft model pinned to the taxonomy's version. Throws Error{kArgument}
/// on an empty title.
AttackModel new_model(std::string_view title, std::set<AdversaryClass> adversary, const Taxonomy& taxonomy);

/// Adds or replaces the tag for tag.technique. Throws Error{kVersion} when the
/// model is pinned to another taxonomy and Error{kNotFound} for unknown ids.
AttackModel tag_technique(const AttackModel& model, TechniqueTag tag, const Taxonomy& taxonomy);

/// Removes the tag if present; the model is returned unchanged otherwise.
AttackModel untag_technique(const AttackModel& model, std::string_view technique_id);

/// Throws Error{kVersion} if the model is pinned to another taxonomy version.
void require_same_version(const AttackModel& model, const Taxonomy& taxonomy);

/// Errors: unresolved or duplicate ids; a Final model without IA or IM tags,
/// without adversary, or with empty evidence. Warnings: empty intermediate
/// columns. Throws Error{kVersion} on a version mismatch.
ValidationReport validate_model(const AttackModel& model, const Taxonomy& taxonomy);

enum class LintMode { kOff, kWarn };

struct CapabilityRuleset {
  std::map<AdversaryClass, std::set<std::string>> allowed;
  LintMode mode = LintMode::kWarn;
  std::string taxonomy_version;

  bool operator==(const CapabilityRuleset&) const = default;
};

/// Parses a ruleset document and checks every technique id against the
/// taxonomy; unresolved ids raise ValidationFailure.
CapabilityRuleset load_capabilities(std::string_view text, const Taxonomy& taxonomy);
CapabilityRuleset load_capabilities_file(const std::filesystem::path& path, const Taxonomy& taxonomy);

/// Ruleset derived from each technique's adversaries field.
CapabilityRuleset capabilities_from_taxonomy(const Taxonomy& taxonomy, LintMode mode = LintMode::kWarn);

/// One CAPABILITY_MISMATCH warning per tag outside the union of the allowed
/// sets of the model's adversary classes. Never emits errors.
ValidationReport lint_capabilities(const AttackModel& model, const CapabilityRuleset& ruleset);

nlohmann::ordered_json model_to_json(const AttackModel& model);
/// Throws Error{kParse} with a field locus.
AttackModel model_from_json(const nlohmann::ordered_json& doc);

/// Stable field order, two-space indent, trailing newline.
std::string serialize_model(const AttackModel& model);
AttackModel parse_model(std::string_view text);
AttackModel load_model_file(const std::filesystem::path& path);

}  // namespace bhadra
