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
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bhadra/attack_model.hpp"
#include "bhadra/taxonomy.hpp"
#include "bhadra/timestamp.hpp"

namespace bhadra {

struct ModelSummary {
  std::string id;
  std::string title;
  ModelStatus status = ModelStatus::kDraft;
  std::set<AdversaryClass> adversary;
  std::size_t tag_count = 0;
  Timestamp modified;

  bool operator==(const ModelSummary&) const = default;
};

ModelSummary summarize(const AttackModel& model);
nlohmann::ordered_json summary_to_json(const ModelSummary& summary);

struct IndexEntry {
  std::filesystem::path path;
  Timestamp modified;
  std::string title;

  bool operator==(const IndexEntry&) const = default;
};

/// Conjunctive filter; unset fields match everything.
struct QueryFilter {
  std::optional<std::string> technique{};
  std::optional<AdversaryClass> adversary{};
  std::optional<std::string> impact{};  ///< must name an IM technique
  std::optional<std::string> text{};  ///< case-insensitive substring of id, title or summary
};

/// Directory of attack models, one "<id>.json" per model. Ids are unique
/// regardless of case. Safe for concurrent use: reads share the index,
/// writers serialize per id.
class Repository {
 public:
  /// Scans `root`. Unreadable, malformed, mismatched or invalid documents are
  /// skipped and reported through warnings(). Throws Error{kIo} when `root` is
  /// not a directory.
  Repository(std::filesystem::path root, Taxonomy taxonomy);
  ~Repository();
  Repository(Repository&&) noexcept;
  Repository& operator=(Repository&&) noexcept;

  const std::filesystem::path& root() const;
  const Taxonomy& taxonomy() const;
  const std::vector<std::string>& warnings() const;

  std::size_t size() const;
  /// Snapshot keyed by model id.
  std::map<std::string, IndexEntry> index() const;
  bool contains(std::string_view id) const;
  std::optional<AttackModel> get(std::string_view id) const;
  /// Every model, ordered by id.
  std::vector<AttackModel> all() const;

  /// Validates and stores the model, returning it as written. `modified` is
  /// set to a fresh timestamp strictly later than any previous value, and
  /// `created` is kept from the stored copy when one exists.
  ///
  /// Throws Error{kArgument} for a malformed id, Error{kVersion} for a model
  /// pinned elsewhere, ValidationFailure on Error findings, and
  /// Error{kConflict} when `expected_modified` is given and does not match
  /// the stored model (or there is none).
  AttackModel put(const AttackModel& model, std::optional<Timestamp> expected_modified = std::nullopt);

  /// False if no such model exists.
  bool remove(std::string_view id);

  /// Matching summaries ordered by (title, id). Unknown technique ids and
  /// non-impact `impact` ids raise Error{kArgument}.
  std::vector<ModelSummary> query(const QueryFilter& filter) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace bhadra
