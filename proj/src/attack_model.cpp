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

#include "bhadra/attack_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "json_support.hpp"

namespace bhadra {

using detail::OrderedField;
using detail::OrderedJson;

namespace {

constexpr std::array<std::string_view, 10> kKnownModelFields{
    "id", "title", "summary", "adversary", "taxonomy_version", "status", "created", "modified", "tags", "sources",
};

// Columns a Final model may leave empty; they are flagged for review only.
constexpr std::array<std::string_view, 6> kIntermediateTactics{"PE", "DI", "LM", "SP", "DE", "CO"};

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
}

Timestamp parse_timestamp(const OrderedField& field) {
  auto text = field.string();
  auto ts = Timestamp::parse(text);
  if (!ts) field.fail("\"" + text + "\" is not a UTC ISO-8601 timestamp");
  return *ts;
}

}  // namespace

std::string_view to_string(Confidence confidence) {
  return confidence == Confidence::kConfirmed ? "Confirmed" : "Suspected";
}

std::string_view to_string(ModelStatus status) { return status == ModelStatus::kDraft ? "Draft" : "Final"; }

std::optional<Confidence> parse_confidence(std::string_view text) {
  if (text == "Confirmed") return Confidence::kConfirmed;
  if (text == "Suspected") return Confidence::kSuspected;
  return std::nullopt;
}

std::optional<ModelStatus> parse_model_status(std::string_view text) {
  if (text == "Draft") return ModelStatus::kDraft;
  if (text == "Final") return ModelStatus::kFinal;
  return std::nullopt;
}

const TechniqueTag* AttackModel::find_tag(std::string_view technique_id) const {
  auto it = std::find_if(tags.begin(), tags.end(), [&](const TechniqueTag& t) { return t.technique == technique_id; });
  return it == tags.end() ? nullptr : &*it;
}

std::set<std::string> AttackModel::technique_ids() const {
  std::set<std::string> ids;
  for (const auto& tag : tags) ids.insert(tag.technique);
  return ids;
}

std::string slugify(std::string_view title) {
  std::string slug;
  bool pending_dash = false;
  for (unsigned char c : title) {
    if (std::isalnum(c) && c < 0x80) {
      if (pending_dash && !slug.empty()) slug.push_back('-');
      pending_dash = false;
      slug.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_dash = true;
    }
  }
  if (slug.size() > 64) slug.resize(64);
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  return slug.empty() ? "model" : slug;
}

bool is_valid_model_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  if (id.front() == '-' || id.back() == '-') return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

void require_same_version(const AttackModel& model, const Taxonomy& taxonomy) {
  if (model.taxonomy_version != taxonomy.version()) {
    throw Error(ErrorCode::kVersion, "model " + model.id + " is pinned to taxonomy " + model.taxonomy_version +
                                         " but taxonomy " + taxonomy.version() + " was supplied");
  }
}

AttackModel new_model(std::string_view title, std::set<AdversaryClass> adversary, const Taxonomy& taxonomy) {
  if (is_blank(title)) throw Error(ErrorCode::kArgument, "model title must not be empty");
  AttackModel model;
  model.id = slugify(title);
  model.title = std::string(title);
  model.adversary = std::move(adversary);
  model.taxonomy_version = taxonomy.version();
  model.created = Timestamp::now();
  model.modified = model.created;
  model.status = ModelStatus::kDraft;
  return model;
}

AttackModel tag_technique(const AttackModel& model, TechniqueTag tag, const Taxonomy& taxonomy) {
  require_same_version(model, taxonomy);
  taxonomy.technique(tag.technique);

  AttackModel out = model;
  auto it = std::find_if(out.tags.begin(), out.tags.end(),
                         [&](const TechniqueTag& t) { return t.technique == tag.technique; });
  if (it != out.tags.end()) {
    *it = std::move(tag);
  } else {
    out.tags.push_back(std::move(tag));
  }
  out.modified = Timestamp::next_after(model.modified);
  return out;
}

AttackModel untag_technique(const AttackModel& model, std::string_view technique_id) {
  AttackModel out = model;
  auto removed = std::remove_if(out.tags.begin(), out.tags.end(),
                                [&](const TechniqueTag& t) { return t.technique == technique_id; });
  if (removed == out.tags.end()) return out;
  out.tags.erase(removed, out.tags.end());
  out.modified = Timestamp::next_after(model.modified);
  return out;
}

ValidationReport validate_model(const AttackModel& model, const Taxonomy& taxonomy) {
  require_same_version(model, taxonomy);
  ValidationReport report;
  const bool final_model = model.status == ModelStatus::kFinal;

  std::set<std::string> seen;
  std::set<std::string> tagged_tactics;
  for (const auto& tag : model.tags) {
    if (!seen.insert(tag.technique).second) {
      report.error("DUPLICATE_TAG", tag.technique, "technique is tagged more than once");
    }
    const Technique* technique = taxonomy.find_technique(tag.technique);
    if (!technique) {
      report.error("UNRESOLVED_TECHNIQUE", tag.technique,
                   "technique does not exist in taxonomy " + taxonomy.version());
      continue;
    }
    tagged_tactics.insert(technique->tactic);
    if (final_model && is_blank(tag.evidence)) {
      report.error("EMPTY_EVIDENCE", tag.technique, "Final models need evidence for every tag");
    }
  }

  if (final_model) {
    if (!tagged_tactics.count("IA")) {
      report.error("MISSING_INITIAL_ACCESS", "IA", "a Final model needs at least one Initial Access tag");
    }
    if (!tagged_tactics.count("IM")) {
      report.error("MISSING_IMPACT", "IM", "a Final model needs at least one Impacts tag");
    }
    if (model.adversary.empty()) {
      report.error("MISSING_ADVERSARY", model.id, "a Final model needs at least one adversary class");
    }
  }

  for (auto tactic_id : kIntermediateTactics) {
    if (!tagged_tactics.count(std::string(tactic_id))) {
      report.warning("EMPTY_TACTIC", std::string(tactic_id),
                     "no technique tagged under " + taxonomy.tactic(tactic_id).name);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Capability lint

CapabilityRuleset load_capabilities(std::string_view text, const Taxonomy& taxonomy) {
  const OrderedJson root = detail::parse_ordered_json(text);
  const OrderedField doc = OrderedField(root, "").object();

  CapabilityRuleset ruleset;
  ruleset.taxonomy_version = doc.string_at("taxonomy_version");
  if (ruleset.taxonomy_version != taxonomy.version()) {
    throw Error(ErrorCode::kVersion, "capability ruleset targets taxonomy " + ruleset.taxonomy_version +
                                         ", loaded taxonomy is " + taxonomy.version());
  }
  const auto mode = doc.string_or("mode", "Warn");
  if (mode == "Off") {
    ruleset.mode = LintMode::kOff;
  } else if (mode == "Warn") {
    ruleset.mode = LintMode::kWarn;
  } else {
    doc.at("mode").fail("mode must be Off or Warn");
  }

  ValidationReport report;
  const OrderedField allowed = doc.at("allowed").object();
  for (const auto& [key, value] : allowed.node().items()) {
    const OrderedField entry = allowed.at(key);
    auto adversary = parse_adversary_class(key);
    if (!adversary) entry.fail("unknown adversary class");
    auto& ids = ruleset.allowed[*adversary];
    for (std::size_t i = 0; i < entry.size(); ++i) {
      auto id = entry.index(i).string();
      if (!taxonomy.find_technique(id)) {
        report.error("UNRESOLVED_TECHNIQUE", id, "capability rule for " + key + " names an unknown technique");
      }
      ids.insert(std::move(id));
    }
  }
  if (!report.valid()) throw ValidationFailure(report, "capability ruleset references unknown techniques");
  return ruleset;
}

CapabilityRuleset load_capabilities_file(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  return load_capabilities(detail::read_text_file(path.string()), taxonomy);
}

CapabilityRuleset capabilities_from_taxonomy(const Taxonomy& taxonomy, LintMode mode) {
  CapabilityRuleset ruleset;
  ruleset.mode = mode;
  ruleset.taxonomy_version = taxonomy.version();
  for (auto adversary : kAllAdversaryClasses) ruleset.allowed[adversary];
  for (const auto& technique : taxonomy.techniques()) {
    for (auto adversary : technique.adversaries) ruleset.allowed[adversary].insert(technique.id);
  }
  return ruleset;
}

ValidationReport lint_capabilities(const AttackModel& model, const CapabilityRuleset& ruleset) {
  ValidationReport report;
  if (ruleset.mode == LintMode::kOff) return report;

  std::set<std::string> reachable;
  for (auto adversary : model.adversary) {
    if (auto it = ruleset.allowed.find(adversary); it != ruleset.allowed.end()) {
      reachable.insert(it->second.begin(), it->second.end());
    }
  }
  for (const auto& tag : model.tags) {
    if (!reachable.count(tag.technique)) {
      std::string who;
      for (auto adversary : model.adversary) {
        if (!who.empty()) who += ", ";
        who += to_string(adversary);
      }
      report.warning("CAPABILITY_MISMATCH", tag.technique,
                     "technique is outside the capabilities of {" + who + "}");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Document format

OrderedJson model_to_json(const AttackModel& model) {
  OrderedJson doc;
  doc["id"] = model.id;
  doc["title"] = model.title;
  doc["summary"] = model.summary;
  OrderedJson adversary = OrderedJson::array();
  for (auto a : model.adversary) adversary.push_back(to_string(a));
  doc["adversary"] = std::move(adversary);
  doc["taxonomy_version"] = model.taxonomy_version;
  doc["status"] = to_string(model.status);
  doc["created"] = model.created.str();
  doc["modified"] = model.modified.str();
  OrderedJson tags = OrderedJson::array();
  for (const auto& tag : model.tags) {
    OrderedJson t;
    t["technique"] = tag.technique;
    t["evidence"] = tag.evidence;
    t["confidence"] = to_string(tag.confidence);
    tags.push_back(std::move(t));
  }
  doc["tags"] = std::move(tags);
  doc["sources"] = model.sources;
  for (const auto& [key, value] : model.extensions.items()) doc[key] = value;
  return doc;
}

namespace {

AttackModel model_from_field(const OrderedField& doc) {
  doc.object();
  AttackModel model;
  model.id = doc.string_at("id");
  model.title = doc.string_at("title");
  model.summary = doc.string_or("summary", "");
  if (doc.has("adversary")) {
    const OrderedField list = doc.at("adversary");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const OrderedField item = list.index(i);
      auto adversary = parse_adversary_class(item.string());
      if (!adversary) item.fail("unknown adversary class \"" + item.string() + "\"");
      model.adversary.insert(*adversary);
    }
  }
  model.taxonomy_version = doc.string_at("taxonomy_version");
  {
    const OrderedField field = doc.at("status");
    auto status = parse_model_status(field.string());
    if (!status) field.fail("status must be Draft or Final");
    model.status = *status;
  }
  model.created = parse_timestamp(doc.at("created"));
  model.modified = parse_timestamp(doc.at("modified"));
  if (doc.has("tags")) {
    const OrderedField list = doc.at("tags");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const OrderedField item = list.index(i).object();
      TechniqueTag tag;
      tag.technique = item.string_at("technique");
      tag.evidence = item.string_or("evidence", "");
      if (item.has("confidence")) {
        const OrderedField c = item.at("confidence");
        auto confidence = parse_confidence(c.string());
        if (!confidence) c.fail("confidence must be Confirmed or Suspected");
        tag.confidence = *confidence;
      }
      model.tags.push_back(std::move(tag));
    }
  }
  if (doc.has("sources")) {
    const OrderedField list = doc.at("sources");
    for (std::size_t i = 0; i < list.size(); ++i) model.sources.push_back(list.index(i).string());
  }
  for (const auto& [key, value] : doc.node().items()) {
    if (std::find(kKnownModelFields.begin(), kKnownModelFields.end(), key) == kKnownModelFields.end()) {
      model.extensions[key] = value;
    }
  }
  return model;
}

}  // namespace

AttackModel model_from_json(const OrderedJson& doc) { return model_from_field(OrderedField(doc, "")); }

std::string serialize_model(const AttackModel& model) { return model_to_json(model).dump(2) + "\n"; }

AttackModel parse_model(std::string_view text) {
  const OrderedJson root = detail::parse_ordered_json(text);
  return model_from_field(OrderedField(root, ""));
}

AttackModel load_model_file(const std::filesystem::path& path) {
  try {
    return parse_model(detail::read_text_file(path.string()));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    throw Error(ErrorCode::kParse, e.what(), path.filename().string());
  }
}

}  // namespace bhadra
