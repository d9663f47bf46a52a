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

#include "bhadra/analytics.hpp"

#include <algorithm>
#include <sstream>

#include "csv.hpp"
#include "json_support.hpp"

namespace bhadra {

using detail::OrderedField;
using detail::OrderedJson;

CorpusStats technique_frequency(std::span<const AttackModel> corpus, const Taxonomy& taxonomy) {
  if (corpus.empty()) throw Error(ErrorCode::kArgument, "corpus is empty");
  CorpusStats stats;
  stats.taxonomy_version = taxonomy.version();
  stats.corpus_size = corpus.size();
  for (const auto& model : corpus) {
    require_same_version(model, taxonomy);
    for (const auto& id : model.technique_ids()) {
      taxonomy.technique(id);
      ++stats.frequency[id];
    }
  }
  for (const auto& tactic : taxonomy.tactics()) stats.tactic_totals[tactic.id] = 0;
  for (const auto& technique : taxonomy.techniques()) {
    auto it = stats.frequency.find(technique.id);
    if (it == stats.frequency.end()) {
      stats.unused.insert(technique.id);
    } else {
      stats.tactic_totals[technique.tactic] += it->second;
    }
  }
  return stats;
}

std::map<Phase, PhaseCoverage> phase_coverage(const AttackModel& model, const Taxonomy& taxonomy) {
  std::map<Phase, PhaseCoverage> coverage;
  for (Phase phase : kAllPhases) coverage[phase];
  std::set<std::string> tagged;
  for (const auto& tag : model.tags) {
    if (const Technique* technique = taxonomy.find_technique(tag.technique)) tagged.insert(technique->tactic);
  }
  for (const auto& tactic : taxonomy.tactics()) {
    auto& entry = coverage[tactic.phase];
    ++entry.total_tactics;
    if (tagged.count(tactic.id)) ++entry.tagged_tactics;
  }
  return coverage;
}

std::uint64_t severity_score(const AttackModel& model, const std::map<std::string, int>& severities) {
  std::uint64_t score = 0;
  for (const auto& id : model.technique_ids()) {
    auto it = severities.find(id);
    if (it == severities.end()) throw Error(ErrorCode::kArgument, "no severity given for tagged technique " + id);
    if (it->second < 1 || it->second > 5) {
      throw Error(ErrorCode::kArgument, "severity of " + id + " is " + std::to_string(it->second) + ", outside [1,5]");
    }
    score += static_cast<std::uint64_t>(it->second);
  }
  return score;
}

int shade_bucket(std::size_t count, std::size_t corpus_size) {
  if (corpus_size == 0 || count == 0) return 0;
  const std::size_t bucket = (4 * count + corpus_size - 1) / corpus_size;
  return static_cast<int>(std::min<std::size_t>(bucket, 4));
}

std::vector<HeatCell> heatmap_grid(const CorpusStats& stats, const Taxonomy& taxonomy) {
  if (stats.taxonomy_version != taxonomy.version()) {
    throw Error(ErrorCode::kVersion, "statistics were computed against taxonomy " + stats.taxonomy_version +
                                         ", not " + taxonomy.version());
  }
  std::vector<HeatCell> grid;
  grid.reserve(taxonomy.techniques().size());
  for (const auto& technique : taxonomy.techniques()) {
    auto it = stats.frequency.find(technique.id);
    const std::size_t count = it == stats.frequency.end() ? 0 : it->second;
    grid.push_back({technique.id, taxonomy.column_of(technique.id), taxonomy.row_of(technique.id), count,
                    shade_bucket(count, stats.corpus_size)});
  }
  std::stable_sort(grid.begin(), grid.end(), [](const HeatCell& a, const HeatCell& b) {
    return std::pair(a.column, a.row) < std::pair(b.column, b.row);
  });
  return grid;
}

OrderedJson stats_to_json(const CorpusStats& stats, const Taxonomy& taxonomy) {
  const auto grid = heatmap_grid(stats, taxonomy);
  OrderedJson doc;
  doc["taxonomy_version"] = stats.taxonomy_version;
  doc["corpus_size"] = stats.corpus_size;
  OrderedJson frequency = OrderedJson::object();
  for (const auto& cell : grid) {
    if (cell.count > 0) frequency[cell.technique] = cell.count;
  }
  doc["frequency"] = std::move(frequency);
  OrderedJson totals = OrderedJson::object();
  for (const auto& tactic : taxonomy.tactics()) {
    auto it = stats.tactic_totals.find(tactic.id);
    totals[tactic.id] = it == stats.tactic_totals.end() ? 0 : it->second;
  }
  doc["tactic_totals"] = std::move(totals);
  OrderedJson unused = OrderedJson::array();
  for (const auto& cell : grid) {
    if (stats.unused.count(cell.technique)) unused.push_back(cell.technique);
  }
  doc["unused"] = std::move(unused);
  OrderedJson cells = OrderedJson::array();
  for (const auto& cell : grid) {
    OrderedJson j;
    j["technique"] = cell.technique;
    j["column"] = cell.column;
    j["row"] = cell.row;
    j["count"] = cell.count;
    j["bucket"] = cell.bucket;
    cells.push_back(std::move(j));
  }
  doc["grid"] = std::move(cells);
  return doc;
}

CorpusStats stats_from_json(const OrderedJson& root) {
  const OrderedField doc = OrderedField(root, "").object();
  CorpusStats stats;
  stats.taxonomy_version = doc.string_at("taxonomy_version");
  const auto size = doc.at("corpus_size").integer();
  if (size < 0) doc.at("corpus_size").fail("must be non-negative");
  stats.corpus_size = static_cast<std::size_t>(size);
  const OrderedField frequency = doc.at("frequency").object();
  for (const auto& [id, value] : frequency.node().items()) {
    const auto count = frequency.at(id).integer();
    if (count < 0) frequency.at(id).fail("must be non-negative");
    stats.frequency[id] = static_cast<std::size_t>(count);
  }
  const OrderedField totals = doc.at("tactic_totals").object();
  for (const auto& [id, value] : totals.node().items()) {
    const auto count = totals.at(id).integer();
    if (count < 0) totals.at(id).fail("must be non-negative");
    stats.tactic_totals[id] = static_cast<std::size_t>(count);
  }
  const OrderedField unused = doc.at("unused");
  for (std::size_t i = 0; i < unused.size(); ++i) stats.unused.insert(unused.index(i).string());
  return stats;
}

std::string stats_csv(const CorpusStats& stats, const Taxonomy& taxonomy) {
  std::ostringstream out;
  out << "id,name,tactic,phase,count,bucket\n";
  for (const auto& cell : heatmap_grid(stats, taxonomy)) {
    const Technique& technique = taxonomy.technique(cell.technique);
    out << detail::csv_field(technique.id) << ',' << detail::csv_field(technique.name) << ','
        << detail::csv_field(technique.tactic) << ',' << to_string(taxonomy.phase_of(technique.tactic)) << ','
        << cell.count << ',' << cell.bucket << '\n';
  }
  return out.str();
}

}  // namespace bhadra
