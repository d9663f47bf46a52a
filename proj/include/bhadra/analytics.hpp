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

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bhadra/attack_model.hpp"
#include "bhadra/taxonomy.hpp"
#include "json.hpp"

namespace bhadra {

struct CorpusStats {
  std::string taxonomy_version;
  std::size_t corpus_size = 0;
  std::map<std::string, std::size_t> frequency;      ///< only techniques used at least once
  std::map<std::string, std::size_t> tactic_totals;  ///< every tactic, zeros included
  std::set<std::string> unused;

  bool operator==(const CorpusStats&) const = default;
};

/// Number of models tagging each technique; a model counts once per technique.
/// Throws Error{kArgument} on an empty corpus and Error{kVersion} on mixed versions.
CorpusStats technique_frequency(std::span<const AttackModel> corpus, const Taxonomy& taxonomy);

struct PhaseCoverage {
  std::size_t tagged_tactics = 0;
  std::size_t total_tactics = 0;

  bool operator==(const PhaseCoverage&) const = default;
};

std::map<Phase, PhaseCoverage> phase_coverage(const AttackModel& model, const Taxonomy& taxonomy);

/// Sum of severities over the tagged techniques. Every tagged technique must be
/// covered and every value must lie in [1,5]; otherwise Error{kArgument}.
std::uint64_t severity_score(const AttackModel& model, const std::map<std::string, int>& severities);

struct HeatCell {
  std::string technique;
  int column = 0;  ///< tactic ordinal
  int row = 0;     ///< 1-based position inside the column
  std::size_t count = 0;
  int bucket = 0;  ///< shade 0..4

  bool operator==(const HeatCell&) const = default;
};

/// ceil(4 * count / corpus_size), clamped to [0,4].
int shade_bucket(std::size_t count, std::size_t corpus_size);

/// All 47 cells in (column, row) order, zero counts included.
std::vector<HeatCell> heatmap_grid(const CorpusStats& stats, const Taxonomy& taxonomy);

nlohmann::ordered_json stats_to_json(const CorpusStats& stats, const Taxonomy& taxonomy);
CorpusStats stats_from_json(const nlohmann::ordered_json& doc);

/// id,name,tactic,phase,count,bucket - one row per technique.
std::string stats_csv(const CorpusStats& stats, const Taxonomy& taxonomy);

}  // namespace bhadra
