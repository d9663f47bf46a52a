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

#include "bhadra/taxonomy.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <regex>
#include <unordered_map>

#include "json_support.hpp"

namespace bhadra {

using detail::Field;
using detail::Json;
using detail::OrderedJson;

namespace {

constexpr std::array<std::string_view, 3> kPhaseNames{"Mounting", "Execution", "Results"};
constexpr std::array<std::string_view, 6> kSubsystemNames{"UE", "RAN", "CN", "SAN", "OSMN", "IRN"};
constexpr std::array<std::string_view, 7> kAdversaryNames{
    "RadioLinkAttacker",  "EvilMobileOperator",       "HumanInsider",   "HardwareSimManufacturer",
    "SoftwareOsVendor",   "LawEnforcementGovernment", "EvilMobileUser",
};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text, int offset = 0) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(static_cast<int>(i) + offset);
  }
  return std::nullopt;
}

const TacticShape* shape_of(std::string_view tactic_id) {
  for (const auto& shape : kMatrixShape) {
    if (shape.id == tactic_id) return &shape;
  }
  return nullptr;
}

int canonical_column(std::string_view tactic_id) {
  for (std::size_t i = 0; i < kMatrixShape.size(); ++i) {
    if (kMatrixShape[i].id == tactic_id) return static_cast<int>(i) + 1;
  }
  return 0;
}

bool is_semver(const std::string& version) {
  static const std::regex pattern(R"(^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(-[0-9A-Za-z.-]+)?$)");
  return std::regex_match(version, pattern);
}

// "<letters>.<positive integer>"
bool well_formed_technique_id(std::string_view id) {
  auto dot = id.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= id.size()) return false;
  for (char c : id.substr(0, dot)) {
    if (c < 'A' || c > 'Z') return false;
  }
  auto digits = id.substr(dot + 1);
  if (digits.front() == '0') return false;
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  return ec == std::errc() && ptr == digits.data() + digits.size() && value > 0;
}

template <typename Enum>
Enum parse_enum(const Field& field, std::optional<Enum> (*parser)(std::string_view)) {
  auto text = field.string();
  auto value = parser(text);
  if (!value) field.fail("unknown value \"" + text + "\"");
  return *value;
}

}  // namespace

std::string_view to_string(Phase phase) { return kPhaseNames.at(static_cast<std::size_t>(ordinal(phase) - 1)); }
std::string_view to_string(Subsystem subsystem) { return kSubsystemNames.at(static_cast<std::size_t>(subsystem)); }
std::string_view to_string(AdversaryClass adversary) {
  return kAdversaryNames.at(static_cast<std::size_t>(adversary));
}

std::optional<Phase> parse_phase(std::string_view text) { return lookup<Phase>(kPhaseNames, text, 1); }
std::optional<Subsystem> parse_subsystem(std::string_view text) { return lookup<Subsystem>(kSubsystemNames, text); }
std::optional<AdversaryClass> parse_adversary_class(std::string_view text) {
  return lookup<AdversaryClass>(kAdversaryNames, text);
}

std::string_view tactic_prefix(std::string_view technique_id) {
  auto dot = technique_id.find('.');
  return dot == std::string_view::npos ? std::string_view{} : technique_id.substr(0, dot);
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_taxonomy(const TaxonomyData& data) {
  ValidationReport report;

  if (!is_semver(data.version)) {
    report.error("VERSION_FORMAT", "version", "taxonomy version \"" + data.version + "\" is not a semantic version");
  }

  // Phases: exactly Mounting(1) < Execution(2) < Results(3).
  if (data.phases.size() != kAllPhases.size()) {
    report.error("PHASE_SET", "phases",
                 "expected 3 phases, found " + std::to_string(data.phases.size()));
  } else {
    for (std::size_t i = 0; i < data.phases.size(); ++i) {
      const auto& phase = data.phases[i];
      if (phase.id != kAllPhases[i] || phase.ordinal != ordinal(kAllPhases[i])) {
        report.error("PHASE_SET", std::string(to_string(phase.id)),
                     "phase order must be Mounting=1, Execution=2, Results=3");
      }
    }
  }

  // Tactics.
  if (data.tactics.size() != kTacticCount) {
    report.error("CARDINALITY", "tactics",
                 "expected 8 tactics, found " + std::to_string(data.tactics.size()));
  }
  std::map<std::string, int, std::less<>> tactic_seen;
  for (const auto& tactic : data.tactics) {
    if (++tactic_seen[tactic.id] > 1) {
      report.error("DUPLICATE_ID", tactic.id, "tactic id appears more than once");
      continue;
    }
    const TacticShape* shape = shape_of(tactic.id);
    if (!shape) {
      report.error("UNKNOWN_TACTIC", tactic.id, "tactic id is not one of IA, PE, DI, LM, SP, DE, CO, IM");
      continue;
    }
    if (tactic.phase != shape->phase) {
      report.error("PHASE_PARTITION", tactic.id,
                   "tactic belongs to phase " + std::string(to_string(shape->phase)) + ", not " +
                       std::string(to_string(tactic.phase)));
    }
    if (tactic.ordinal != canonical_column(tactic.id)) {
      report.error("TACTIC_ORDINAL", tactic.id,
                   "column ordinal must be " + std::to_string(canonical_column(tactic.id)));
    }
    if (tactic.name.empty()) report.error("EMPTY_NAME", tactic.id, "tactic name is empty");
  }
  for (const auto& shape : kMatrixShape) {
    if (!tactic_seen.count(shape.id)) {
      report.error("MISSING_TACTIC", std::string(shape.id), "required tactic is absent");
    }
  }

  // Techniques.
  if (data.techniques.size() != kTechniqueCount) {
    report.error("CARDINALITY", "techniques",
                 "expected 47 techniques, found " + std::to_string(data.techniques.size()));
  }
  std::map<std::string, int, std::less<>> technique_seen;
  std::map<std::string, std::size_t, std::less<>> per_tactic;
  std::map<Phase, std::size_t> per_phase;
  for (const auto& technique : data.techniques) {
    if (++technique_seen[technique.id] > 1) {
      report.error("DUPLICATE_ID", technique.id, "technique id appears more than once");
    }
    if (!well_formed_technique_id(technique.id)) {
      report.error("ID_FORMAT", technique.id, "technique id must look like <tactic>.<n>");
    } else if (tactic_prefix(technique.id) != technique.tactic) {
      report.error("ID_PREFIX_MISMATCH", technique.id,
                   "id prefix does not match owning tactic " + technique.tactic);
    }
    if (!tactic_seen.count(technique.tactic)) {
      report.error("UNRESOLVED_REFERENCE", technique.id, "owning tactic " + technique.tactic + " does not exist");
    } else {
      ++per_tactic[technique.tactic];
      if (const TacticShape* shape = shape_of(technique.tactic)) ++per_phase[shape->phase];
    }
    if (technique.severity && (*technique.severity < 1 || *technique.severity > 5)) {
      report.error("SEVERITY_RANGE", technique.id,
                   "severity " + std::to_string(*technique.severity) + " outside [1,5]");
    }
    if (technique.name.empty()) report.error("EMPTY_NAME", technique.id, "technique name is empty");
  }

  for (const auto& shape : kMatrixShape) {
    auto it = per_tactic.find(shape.id);
    std::size_t count = it == per_tactic.end() ? 0 : it->second;
    if (count != shape.technique_count) {
      report.error("CARDINALITY", std::string(shape.id),
                   "expected " + std::to_string(shape.technique_count) + " techniques, found " +
                       std::to_string(count));
    }
  }
  for (Phase phase : kAllPhases) {
    std::size_t expected = 0;
    for (const auto& shape : kMatrixShape) {
      if (shape.phase == phase) expected += shape.technique_count;
    }
    if (per_phase[phase] != expected) {
      report.error("CARDINALITY", std::string(to_string(phase)),
                   "expected " + std::to_string(expected) + " techniques in phase, found " +
                       std::to_string(per_phase[phase]));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Taxonomy

struct Taxonomy::Impl {
  TaxonomyData data;
  std::unordered_map<std::string, std::size_t> tactic_index;
  std::unordered_map<std::string, std::size_t> technique_index;
  std::unordered_map<std::string, int> rows;
};

std::variant<Taxonomy, ValidationReport> Taxonomy::create(TaxonomyData data) {
  ValidationReport report = validate_taxonomy(data);
  if (!report.valid()) return report;

  auto impl = std::make_shared<Impl>();
  impl->data = std::move(data);
  for (std::size_t i = 0; i < impl->data.tactics.size(); ++i) impl->tactic_index.emplace(impl->data.tactics[i].id, i);
  std::unordered_map<std::string, int> next_row;
  for (std::size_t i = 0; i < impl->data.techniques.size(); ++i) {
    const auto& technique = impl->data.techniques[i];
    impl->technique_index.emplace(technique.id, i);
    impl->rows.emplace(technique.id, ++next_row[technique.tactic]);
  }
  return Taxonomy(std::move(impl));
}

const TaxonomyData& Taxonomy::data() const { return impl_->data; }

const Tactic* Taxonomy::find_tactic(std::string_view id) const noexcept {
  auto it = impl_->tactic_index.find(std::string(id));
  return it == impl_->tactic_index.end() ? nullptr : &impl_->data.tactics[it->second];
}

const Technique* Taxonomy::find_technique(std::string_view id) const noexcept {
  auto it = impl_->technique_index.find(std::string(id));
  return it == impl_->technique_index.end() ? nullptr : &impl_->data.techniques[it->second];
}

const Tactic& Taxonomy::tactic(std::string_view id) const {
  if (const Tactic* t = find_tactic(id)) return *t;
  throw Error(ErrorCode::kNotFound, "unknown tactic \"" + std::string(id) + "\"");
}

const Technique& Taxonomy::technique(std::string_view id) const {
  if (const Technique* t = find_technique(id)) return *t;
  throw Error(ErrorCode::kNotFound, "unknown technique \"" + std::string(id) + "\"");
}

std::vector<Technique> Taxonomy::techniques_of(std::string_view tactic_id) const {
  tactic(tactic_id);
  std::vector<Technique> out;
  for (const auto& technique : impl_->data.techniques) {
    if (technique.tactic == tactic_id) out.push_back(technique);
  }
  return out;
}

Phase Taxonomy::phase_of(std::string_view tactic_id) const { return tactic(tactic_id).phase; }

int Taxonomy::row_of(std::string_view technique_id) const {
  auto it = impl_->rows.find(std::string(technique_id));
  if (it == impl_->rows.end()) throw Error(ErrorCode::kNotFound, "unknown technique \"" + std::string(technique_id) + "\"");
  return it->second;
}

int Taxonomy::column_of(std::string_view technique_id) const {
  return tactic(technique(technique_id).tactic).ordinal;
}

// ---------------------------------------------------------------------------
// Document format

TaxonomyData parse_taxonomy_document(std::string_view text) {
  const Json root = detail::parse_json(text);
  const Field doc = Field(root, "").object();

  TaxonomyData data;
  const auto format = doc.at("format_version").integer();
  if (format != 1) doc.at("format_version").fail("unsupported format_version " + std::to_string(format));
  data.format_version = static_cast<int>(format);
  data.version = doc.string_at("version");
  data.provenance = doc.string_or("provenance", "");

  const Field phases = doc.at("phases");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const Field p = phases.index(i).object();
    PhaseInfo info;
    info.id = parse_enum<Phase>(p.at("id"), &parse_phase);
    info.ordinal = static_cast<int>(p.at("ordinal").integer());
    info.name = p.string_or("name", "");
    info.description = p.string_or("description", "");
    data.phases.push_back(std::move(info));
  }

  const Field tactics = doc.at("tactics");
  for (std::size_t i = 0; i < tactics.size(); ++i) {
    const Field t = tactics.index(i).object();
    Tactic tactic;
    tactic.id = t.string_at("id");
    tactic.name = t.string_at("name");
    tactic.phase = parse_enum<Phase>(t.at("phase"), &parse_phase);
    tactic.ordinal = static_cast<int>(t.at("ordinal").integer());
    tactic.description = t.string_or("description", "");
    data.tactics.push_back(std::move(tactic));
  }

  const Field techniques = doc.at("techniques");
  for (std::size_t i = 0; i < techniques.size(); ++i) {
    const Field t = techniques.index(i).object();
    Technique technique;
    technique.id = t.string_at("id");
    technique.name = t.string_at("name");
    technique.tactic = t.string_at("tactic");
    technique.description = t.string_or("description", "");
    if (t.has("subsystems")) {
      const Field list = t.at("subsystems");
      for (std::size_t k = 0; k < list.size(); ++k) {
        technique.subsystems.insert(parse_enum<Subsystem>(list.index(k), &parse_subsystem));
      }
    }
    if (t.has("adversaries")) {
      const Field list = t.at("adversaries");
      for (std::size_t k = 0; k < list.size(); ++k) {
        technique.adversaries.insert(parse_enum<AdversaryClass>(list.index(k), &parse_adversary_class));
      }
    }
    if (t.has("references")) {
      const Field list = t.at("references");
      for (std::size_t k = 0; k < list.size(); ++k) technique.references.push_back(list.index(k).string());
    }
    if (t.has("severity") && !t.at("severity").node().is_null()) {
      technique.severity = static_cast<int>(t.at("severity").integer());
    }
    technique.provenance = t.string_or("provenance", "");
    data.techniques.push_back(std::move(technique));
  }
  return data;
}

std::variant<Taxonomy, ValidationReport> load_taxonomy(std::string_view text) {
  return Taxonomy::create(parse_taxonomy_document(text));
}

std::variant<Taxonomy, ValidationReport> load_taxonomy_file(const std::filesystem::path& path) {
  return load_taxonomy(detail::read_text_file(path.string()));
}

Taxonomy load_valid_taxonomy_file(const std::filesystem::path& path) {
  auto result = load_taxonomy_file(path);
  if (auto* report = std::get_if<ValidationReport>(&result)) {
    throw ValidationFailure(*report, "taxonomy " + path.string() + " is invalid");
  }
  return std::get<Taxonomy>(std::move(result));
}

std::string serialize_taxonomy(const TaxonomyData& data) {
  OrderedJson doc;
  doc["format_version"] = data.format_version;
  doc["version"] = data.version;
  if (!data.provenance.empty()) doc["provenance"] = data.provenance;

  OrderedJson phases = OrderedJson::array();
  for (const auto& p : data.phases) {
    OrderedJson j;
    j["id"] = to_string(p.id);
    j["ordinal"] = p.ordinal;
    j["name"] = p.name;
    j["description"] = p.description;
    phases.push_back(std::move(j));
  }
  doc["phases"] = std::move(phases);

  OrderedJson tactics = OrderedJson::array();
  for (const auto& t : data.tactics) {
    OrderedJson j;
    j["id"] = t.id;
    j["name"] = t.name;
    j["phase"] = to_string(t.phase);
    j["ordinal"] = t.ordinal;
    j["description"] = t.description;
    tactics.push_back(std::move(j));
  }
  doc["tactics"] = std::move(tactics);

  OrderedJson techniques = OrderedJson::array();
  for (const auto& t : data.techniques) {
    OrderedJson j;
    j["id"] = t.id;
    j["name"] = t.name;
    j["tactic"] = t.tactic;
    j["description"] = t.description;
    OrderedJson subsystems = OrderedJson::array();
    for (auto s : t.subsystems) subsystems.push_back(to_string(s));
    j["subsystems"] = std::move(subsystems);
    OrderedJson adversaries = OrderedJson::array();
    for (auto a : t.adversaries) adversaries.push_back(to_string(a));
    j["adversaries"] = std::move(adversaries);
    j["references"] = t.references;
    if (t.severity) j["severity"] = *t.severity;
    if (!t.provenance.empty()) j["provenance"] = t.provenance;
    techniques.push_back(std::move(j));
  }
  doc["techniques"] = std::move(techniques);
  return doc.dump(2) + "\n";
}

}  // namespace bhadra
