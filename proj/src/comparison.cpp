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

#include "bhadra/comparison.hpp"

#include <algorithm>

#include "json_support.hpp"

namespace bhadra {

using detail::OrderedField;
using detail::OrderedJson;

namespace {

void require_same_version(const AttackModel& a, const AttackModel& b) {
  if (a.taxonomy_version != b.taxonomy_version) {
    throw Error(ErrorCode::kVersion, "models " + a.id + " (" + a.taxonomy_version + ") and " + b.id + " (" +
                                         b.taxonomy_version + ") are pinned to different taxonomies");
  }
}

std::set<std::string> read_string_set(const OrderedField& field) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < field.size(); ++i) out.insert(field.index(i).string());
  return out;
}

}  // namespace

const std::vector<std::string>& default_palette() {
  static const std::vector<std::string> palette{
      "#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2", "#edc948", "#9c755f", "#bab0ac",
      "#e15759",  // overlap
  };
  return palette;
}

OverlapMatrix overlap(std::span<const AttackModel> models) {
  if (models.size() < 2) throw Error(ErrorCode::kArgument, "overlap needs at least two models");
  OverlapMatrix matrix;
  std::set<std::string> ids;
  for (const auto& model : models) {
    require_same_version(models.front(), model);
    if (!ids.insert(model.id).second) throw Error(ErrorCode::kArgument, "model " + model.id + " appears twice");
    matrix.models.push_back(model.id);
    for (const auto& technique : model.technique_ids()) matrix.cells[technique].insert(model.id);
  }
  return matrix;
}

Ratio similarity(const AttackModel& a, const AttackModel& b) {
  require_same_version(a, b);
  const auto left = a.technique_ids();
  const auto right = b.technique_ids();
  if (left.empty() && right.empty()) {
    throw Error(ErrorCode::kUndefined, "similarity of two models without tags is undefined");
  }
  std::vector<std::string> common;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(common));
  return Ratio{common.size(), left.size() + right.size() - common.size()};
}

std::vector<ComparisonLayer> build_layers(std::span<const AttackModel> models, std::span<const std::string> palette,
                                          const Taxonomy& taxonomy) {
  const OverlapMatrix matrix = overlap(models);
  require_same_version(models.front(), taxonomy);
  if (palette.size() < models.size() + 1) {
    throw Error(ErrorCode::kArgument, "palette has " + std::to_string(palette.size()) + " colors, " +
                                          std::to_string(models.size() + 1) +
                                          " needed (one per model plus the overlap color)");
  }
  if (std::any_of(palette.begin(), palette.end(), [](const std::string& c) { return c.empty(); })) {
    throw Error(ErrorCode::kArgument, "palette colors must not be empty");
  }

  std::vector<ComparisonLayer> layers;
  layers.reserve(matrix.cells.size());
  for (const auto& [technique, members] : matrix.cells) {
    taxonomy.technique(technique);
    ComparisonLayer layer{technique, palette.back(), members};
    if (members.size() == 1) {
      auto index = std::find(matrix.models.begin(), matrix.models.end(), *members.begin()) - matrix.models.begin();
      layer.color = palette[static_cast<std::size_t>(index)];
    }
    layers.push_back(std::move(layer));
  }
  std::sort(layers.begin(), layers.end(), [&](const ComparisonLayer& a, const ComparisonLayer& b) {
    return std::pair(taxonomy.column_of(a.technique), taxonomy.row_of(a.technique)) <
           std::pair(taxonomy.column_of(b.technique), taxonomy.row_of(b.technique));
  });
  return layers;
}

ModelDiff diff(const AttackModel& a, const AttackModel& b) {
  require_same_version(a, b);
  const auto left = a.technique_ids();
  const auto right = b.technique_ids();
  ModelDiff out;
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                      std::inserter(out.only_a, out.only_a.end()));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                      std::inserter(out.only_b, out.only_b.end()));
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::inserter(out.common, out.common.end()));
  return out;
}

ComparisonResult compare(std::span<const AttackModel> models, std::span<const std::string> palette,
                         const Taxonomy& taxonomy) {
  ComparisonResult result;
  result.layers = build_layers(models, palette, taxonomy);
  result.overlap = overlap(models);
  result.palette.assign(palette.begin(), palette.end());
  result.taxonomy_version = taxonomy.version();
  return result;
}

OrderedJson comparison_to_json(const ComparisonResult& result, const Taxonomy& taxonomy) {
  OrderedJson doc;
  doc["taxonomy_version"] = result.taxonomy_version;
  doc["models"] = result.overlap.models;
  doc["palette"] = result.palette;
  doc["overlap_color"] = result.palette.empty() ? std::string() : result.palette.back();

  // cells in matrix order so that diffs of exported files stay readable
  std::vector<std::string> occupied;
  for (const auto& [technique, members] : result.overlap.cells) occupied.push_back(technique);
  std::sort(occupied.begin(), occupied.end(), [&](const std::string& a, const std::string& b) {
    return std::pair(taxonomy.column_of(a), taxonomy.row_of(a)) < std::pair(taxonomy.column_of(b), taxonomy.row_of(b));
  });
  OrderedJson cells = OrderedJson::object();
  for (const auto& technique : occupied) cells[technique] = result.overlap.cells.at(technique);
  doc["cells"] = std::move(cells);

  OrderedJson layers = OrderedJson::array();
  for (const auto& layer : result.layers) {
    OrderedJson j;
    j["technique"] = layer.technique;
    j["tactic"] = std::string(tactic_prefix(layer.technique));
    j["color"] = layer.color;
    j["members"] = layer.members;
    layers.push_back(std::move(j));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

ComparisonResult comparison_from_json(const OrderedJson& root) {
  const OrderedField doc = OrderedField(root, "").object();
  ComparisonResult result;
  result.taxonomy_version = doc.string_at("taxonomy_version");
  {
    const OrderedField models = doc.at("models");
    for (std::size_t i = 0; i < models.size(); ++i) result.overlap.models.push_back(models.index(i).string());
  }
  {
    const OrderedField palette = doc.at("palette");
    for (std::size_t i = 0; i < palette.size(); ++i) result.palette.push_back(palette.index(i).string());
  }
  const OrderedField cells = doc.at("cells").object();
  for (const auto& [technique, members] : cells.node().items()) {
    result.overlap.cells[technique] = read_string_set(cells.at(technique));
  }
  const OrderedField layers = doc.at("layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const OrderedField item = layers.index(i).object();
    result.layers.push_back({item.string_at("technique"), item.string_at("color"), read_string_set(item.at("members"))});
  }
  return result;
}

}  // namespace bhadra
