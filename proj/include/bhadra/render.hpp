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
#include <string>
#include <string_view>

#include "bhadra/analytics.hpp"
#include "bhadra/comparison.hpp"
#include "bhadra/taxonomy.hpp"

namespace bhadra {

/// Fixed SVG geometry, in user units. See docs/FORMATS.md.
struct SvgGeometry {
  static constexpr int kMargin = 10;
  static constexpr int kColumnWidth = 180;
  static constexpr int kPhaseBandHeight = 24;
  static constexpr int kHeaderHeight = 40;
  static constexpr int kCellHeight = 44;
  static constexpr int kLegendRowHeight = 20;
};

/// technique,name,tactic,color,members (members joined with ';'), one row per layer.
std::string render_layers_csv(const ComparisonResult& result, const Taxonomy& taxonomy);
/// 8-column matrix; occupied cells filled with their layer color, plus a legend.
std::string render_layers_svg(const ComparisonResult& result, const Taxonomy& taxonomy);

/// Same rows as stats_csv.
std::string render_stats_csv(const CorpusStats& stats, const Taxonomy& taxonomy);
/// 8-column matrix shaded by heat bucket.
std::string render_stats_svg(const CorpusStats& stats, const Taxonomy& taxonomy);

/// Fill colors for shade buckets 0..4, lightest first.
const std::array<std::string_view, 5>& shade_colors();

}  // namespace bhadra
