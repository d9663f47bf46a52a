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

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bhadra/validation.hpp"

namespace bhadra {

enum class Phase { kMounting = 1, kExecution = 2, kResults = 3 };

enum class Subsystem { kUE, kRAN, kCN, kSAN, kOSMN, kIRN };

enum class AdversaryClass {
  kRadioLinkAttacker,
  kEvilMobileOperator,
  kHumanInsider,
  kHardwareSimManufacturer,
  kSoftwareOsVendor,
  kLawEnforcementGovernment,
  kEvilMobileUser,
};

inline constexpr std::array kAllPhases{Phase::kMounting, Phase::kExecution, Phase::kResults};

inline constexpr std::array kAllSubsystems{Subsystem::kUE,  Subsystem::kRAN,  Subsystem::kCN,
                                           Subsystem::kSAN, Subsystem::kOSMN, Subsystem::kIRN};

inline constexpr std::array kAllAdversaryClasses{
    AdversaryClass::kRadioLinkAttacker,       AdversaryClass::kEvilMobileOperator,
    AdversaryClass::kHumanInsider,            AdversaryClass::kHardwareSimManufacturer,
    AdversaryClass::kSoftwareOsVendor,        AdversaryClass::kLawEnforcementGovernment,
    AdversaryClass::kEvilMobileUser,
};

constexpr int ordinal(Phase phase) { return static_cast<int>(phase); }

std::string_view to_string(Phase phase);
std::string_view to_string(Subsystem subsystem);
std::string_view to_string(AdversaryClass adversary);
std::optional<Phase> parse_phase(std::string_view text);
std::optional<Subsystem> parse_subsystem(std::string_view text);
std::optional<AdversaryClass> parse_adversary_class(std::string_view text);

/// Fixed shape of the matrix: column id, owning phase and the number of
/// techniques the column must hold.
struct TacticShape {
  std::string_view id;
  Phase phase;
  std::size_t technique_count;
};

inline constexpr std::array<TacticShape, 8> kMatrixShape{{
    {"IA", Phase::kMounting, 7},
    {"PE", Phase::kMounting, 5},
    {"DI", Phase::kMounting, 6},
    {"LM", Phase::kExecution, 3},
    {"SP", Phase::kExecution, 5},
    {"DE", Phase::kExecution, 8},
    {"CO", Phase::kResults, 5},
    {"IM", Phase::kResults, 8},
}};

inline constexpr std::size_t kTacticCount = 8;
inline constexpr std::size_t kTechniqueCount = 47;

struct PhaseInfo {
  Phase id = Phase::kMounting;
  int ordinal = 1;
  std::string name;
  std::string description;

  bool operator==(const PhaseInfo&) const = default;
};

struct Tactic {
  std::string id;
  std::string name;
  Phase phase = Phase::kMounting;
  std::string description;
  int ordinal = 0;  ///< column position, 1..8

  bool operator==(const Tactic&) const = default;
};

struct Technique {
  std::string id;  ///< "<tactic>.<n>"
  std::string name;
  std::string tactic;
  std::string description;
  std::set<Subsystem> subsystems;
  std::set<AdversaryClass> adversaries;
  std::vector<std::string> references;
  std::optional<int> severity;  ///< 1..5 when present
  std::string provenance;

  bool operator==(const Technique&) const = default;
};

/// Plain, unchecked contents of a taxonomy document.
struct TaxonomyData {
  int format_version = 1;
  std::string version;
  std::string provenance;
  std::vector<PhaseInfo> phases;
  std::vector<Tactic> tactics;
  std::vector<Technique> techniques;

  bool operator==(const TaxonomyData&) const = default;
};

/// Every invariant of the matrix, reported as findings rather than thrown.
ValidationReport validate_taxonomy(const TaxonomyData& data);

/// An immutable, validated matrix. Copies share storage; safe to read from
/// any number of threads.
class Taxonomy {
 public:
  /// Returns the taxonomy, or the report listing every violated invariant.
  static std::variant<Taxonomy, ValidationReport> create(TaxonomyData data);

  const TaxonomyData& data() const;
  const std::string& version() const { return data().version; }
  std::span<const Tactic> tactics() const { return data().tactics; }
  std::span<const Technique> techniques() const { return data().techniques; }

  const Tactic* find_tactic(std::string_view id) const noexcept;
  const Technique* find_technique(std::string_view id) const noexcept;

  /// Throws Error{kNotFound}.
  const Tactic& tactic(std::string_view id) const;
  const Technique& technique(std::string_view id) const;

  /// Techniques of one column in file order. Throws Error{kNotFound}.
  std::vector<Technique> techniques_of(std::string_view tactic_id) const;
  Phase phase_of(std::string_view tactic_id) const;

  /// 1-based row of a technique within its column.
  int row_of(std::string_view technique_id) const;
  /// Column ordinal of the tactic owning a technique.
  int column_of(std::string_view technique_id) const;

  bool operator==(const Taxonomy& other) const { return data() == other.data(); }

 private:
  struct Impl;
  explicit Taxonomy(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Parses a taxonomy document without checking invariants. Throws Error{kParse}
/// with a line or field locus.
TaxonomyData parse_taxonomy_document(std::string_view text);

/// Parse plus invariant check. Parse failures throw; invariant violations
/// come back as an Invalid report, never as a partial taxonomy.
std::variant<Taxonomy, ValidationReport> load_taxonomy(std::string_view text);

/// Reads the file (Error{kIo} on failure) and calls load_taxonomy.
std::variant<Taxonomy, ValidationReport> load_taxonomy_file(const std::filesystem::path& path);

/// Loads a file that must be valid; an Invalid report is rethrown as
/// ValidationFailure.
Taxonomy load_valid_taxonomy_file(const std::filesystem::path& path);

std::string serialize_taxonomy(const TaxonomyData& data);
inline std::string serialize_taxonomy(const Taxonomy& taxonomy) { return serialize_taxonomy(taxonomy.data()); }

inline std::vector<Technique> techniques_of(const Taxonomy& taxonomy, std::string_view tactic_id) {
  return taxonomy.techniques_of(tactic_id);
}
inline Phase phase_of(const Taxonomy& taxonomy, std::string_view tactic_id) {
  return taxonomy.phase_of(tactic_id);
}
inline const Technique& technique_by_id(const Taxonomy& taxonomy, std::string_view id) {
  return taxonomy.technique(id);
}

/// Splits "IA.2" into its tactic prefix; empty when the id is not dotted.
std::string_view tactic_prefix(std::string_view technique_id);

}  // namespace bhadra
