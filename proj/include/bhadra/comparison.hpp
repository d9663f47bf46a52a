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

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bhadra/attack_model.hpp"
#include "bhadra/taxonomy.hpp"
#include "json.hpp"

namespace bhadra {

/// Which input models tag each technique. Only occupied cells are present.
struct OverlapMatrix {
  std::vector<std::string> models;
  std::map<std::string, std::set<std::string>> cells;

  bool operator==(const OverlapMatrix&) const = default;
};

/// Exact non-negative fraction; equality compares values, not representations.
struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

struct ComparisonLayer {
  std::string technique;
  std::string color;
  std::set<std::string> members;

  bool operator==(const ComparisonLayer&) const = default;
};

struct ModelDiff {
  std::set<std::string> only_a;
  std::set<std::string> only_b;
  std::set<std::string> common;

  bool operator==(const ModelDiff&) const = default;
};

/// Eight per-model colors followed by the shared overlap color.
const std::vector<std::string>& default_palette();

/// Throws Error{kArgument} for fewer than two models or repeated ids, and
/// Error{kVersion} when the models are pinned to different taxonomies.
OverlapMatrix overlap(std::span<const AttackModel> models);

/// Jaccard index of the two technique-id sets. Throws Error{kUndefined} when
/// both are empty.
Ratio similarity(const AttackModel& a, const AttackModel& b);

/// One layer per occupied cell, ordered by (column, row). Model i is painted
/// palette[i]; any cell with two or more members gets palette.back(). The
/// palette needs one entry per model plus the overlap color.
std::vector<ComparisonLayer> build_layers(std::span<const AttackModel> models, std::span<const std::string> palette,
                                          const Taxonomy& taxonomy);

ModelDiff diff(const AttackModel& a, const AttackModel& b);

/// Overlap matrix and layers together, as exported to the UI and renderers.
struct ComparisonResult {
  std::string taxonomy_version;
  OverlapMatrix overlap;
  std::vector<std::string> palette;
  std::vector<ComparisonLayer> layers;

  bool operator==(const ComparisonResult&) const = default;
};

ComparisonResult compare(std::span<const AttackModel> models, std::span<const std::string> palette,
                         const Taxonomy& taxonomy);

nlohmann::ordered_json comparison_to_json(const ComparisonResult& result, const Taxonomy& taxonomy);
ComparisonResult comparison_from_json(const nlohmann::ordered_json& doc);

}  // namespace bhadra
