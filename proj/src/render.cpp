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

#include "bhadra/render.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "csv.hpp"

namespace bhadra {

namespace {

using G = SvgGeometry;

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Greedy word wrap into at most two lines of `width` characters.
std::vector<std::string> wrap(std::string_view text, std::size_t width) {
  std::vector<std::string> lines(1);
  std::istringstream words{std::string(text)};
  std::string word;
  while (words >> word) {
    auto& line = lines.back();
    if (!line.empty() && line.size() + 1 + word.size() > width) {
      if (lines.size() == 2) {
        line += "...";
        break;
      }
      lines.emplace_back();
    }
    if (!lines.back().empty()) lines.back().push_back(' ');
    lines.back() += word;
  }
  return lines;
}

struct CellStyle {
  std::string fill;
  std::string text = "#000000";
};

std::size_t max_rows(const Taxonomy& taxonomy) {
  std::size_t rows = 0;
  for (const auto& tactic : taxonomy.tactics()) rows = std::max(rows, taxonomy.techniques_of(tactic.id).size());
  return rows;
}

void draw_matrix(std::ostream& out, const Taxonomy& taxonomy, const std::function<CellStyle(const Technique&)>& style,
                 int legend_rows) {
  const int columns = static_cast<int>(taxonomy.tactics().size());
  const int rows = static_cast<int>(max_rows(taxonomy));
  const int width = 2 * G::kMargin + columns * G::kColumnWidth;
  const int grid_top = G::kMargin + G::kPhaseBandHeight + G::kHeaderHeight;
  const int height = grid_top + rows * G::kCellHeight + legend_rows * G::kLegendRowHeight + G::kMargin +
                     (legend_rows > 0 ? G::kMargin : 0);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

  // phase bands over the columns they own
  for (const auto& phase : taxonomy.data().phases) {
    int first = columns + 1, last = 0;
    for (const auto& tactic : taxonomy.tactics()) {
      if (tactic.phase == phase.id) {
        first = std::min(first, tactic.ordinal);
        last = std::max(last, tactic.ordinal);
      }
    }
    if (last == 0) continue;
    const int x = G::kMargin + (first - 1) * G::kColumnWidth;
    const int w = (last - first + 1) * G::kColumnWidth;
    out << "<g class=\"phase\"><rect x=\"" << x << "\" y=\"" << G::kMargin << "\" width=\"" << w << "\" height=\""
        << G::kPhaseBandHeight << "\" fill=\"#404040\" stroke=\"#ffffff\"/>"
        << "<text x=\"" << x + w / 2 << "\" y=\"" << G::kMargin + 16
        << "\" font-size=\"12\" fill=\"#ffffff\" text-anchor=\"middle\">" << xml_escape(phase.name) << "</text></g>\n";
  }

  for (const auto& tactic : taxonomy.tactics()) {
    const int x = G::kMargin + (tactic.ordinal - 1) * G::kColumnWidth;
    const int y = G::kMargin + G::kPhaseBandHeight;
    out << "<g class=\"tactic\" data-tactic=\"" << xml_escape(tactic.id) << "\"><rect x=\"" << x << "\" y=\"" << y
        << "\" width=\"" << G::kColumnWidth << "\" height=\"" << G::kHeaderHeight
        << "\" fill=\"#d9d9d9\" stroke=\"#808080\"/><text x=\"" << x + G::kColumnWidth / 2 << "\" y=\"" << y + 25
        << "\" font-size=\"13\" font-weight=\"bold\" text-anchor=\"middle\">" << xml_escape(tactic.name)
        << "</text></g>\n";

    int row = 0;
    for (const auto& technique : taxonomy.techniques_of(tactic.id)) {
      const CellStyle cell = style(technique);
      const int cy = grid_top + row * G::kCellHeight;
      out << "<g class=\"technique\" data-technique=\"" << xml_escape(technique.id) << "\"><rect x=\"" << x
          << "\" y=\"" << cy << "\" width=\"" << G::kColumnWidth << "\" height=\"" << G::kCellHeight << "\" fill=\""
          << xml_escape(cell.fill) << "\" stroke=\"#808080\"/><text x=\"" << x + 6 << "\" y=\"" << cy + 15
          << "\" font-size=\"10\" fill=\"" << cell.text << "\">";
      const auto lines = wrap(technique.id + " " + technique.name, 32);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        out << "<tspan x=\"" << x + 6 << "\" dy=\"" << (i == 0 ? 0 : 13) << "\">" << xml_escape(lines[i])
            << "</tspan>";
      }
      out << "</text></g>\n";
      ++row;
    }
  }
}

}  // namespace

const std::array<std::string_view, 5>& shade_colors() {
  static constexpr std::array<std::string_view, 5> colors{"#ffffff", "#fee5d9", "#fcae91", "#fb6a4a", "#cb181d"};
  return colors;
}

std::string render_layers_csv(const ComparisonResult& result, const Taxonomy& taxonomy) {
  std::ostringstream out;
  out << "technique,name,tactic,color,members\n";
  for (const auto& layer : result.layers) {
    const Technique& technique = taxonomy.technique(layer.technique);
    std::string members;
    for (const auto& id : result.overlap.models) {
      if (!layer.members.count(id)) continue;
      if (!members.empty()) members += ';';
      members += id;
    }
    out << detail::csv_field(technique.id) << ',' << detail::csv_field(technique.name) << ','
        << detail::csv_field(technique.tactic) << ',' << detail::csv_field(layer.color) << ','
        << detail::csv_field(members) << '\n';
  }
  return out.str();
}

std::string render_layers_svg(const ComparisonResult& result, const Taxonomy& taxonomy) {
  std::map<std::string, const ComparisonLayer*> by_technique;
  for (const auto& layer : result.layers) {
    taxonomy.technique(layer.technique);
    by_technique[layer.technique] = &layer;
  }
  std::ostringstream out;
  const int legend_rows = static_cast<int>(result.overlap.models.size()) + 1;
  draw_matrix(
      out, taxonomy,
      [&](const Technique& technique) {
        auto it = by_technique.find(technique.id);
        return CellStyle{it == by_technique.end() ? "#ffffff" : it->second->color};
      },
      legend_rows);

  const int legend_top = G::kMargin + G::kPhaseBandHeight + G::kHeaderHeight +
                         static_cast<int>(max_rows(taxonomy)) * G::kCellHeight + G::kMargin;
  auto legend_entry = [&](int index, const std::string& color, const std::string& label) {
    const int y = legend_top + index * G::kLegendRowHeight;
    out << "<g class=\"legend\"><rect x=\"" << G::kMargin << "\" y=\"" << y << "\" width=\"14\" height=\"14\" fill=\""
        << xml_escape(color) << "\" stroke=\"#808080\"/><text x=\"" << G::kMargin + 20 << "\" y=\"" << y + 11
        << "\" font-size=\"11\">" << xml_escape(label) << "</text></g>\n";
  };
  for (std::size_t i = 0; i < result.overlap.models.size(); ++i) {
    legend_entry(static_cast<int>(i), i < result.palette.size() ? result.palette[i] : "#ffffff",
                 result.overlap.models[i]);
  }
  legend_entry(legend_rows - 1, result.palette.empty() ? "#ffffff" : result.palette.back(), "shared by 2+ models");
  out << "</svg>\n";
  return out.str();
}

std::string render_stats_csv(const CorpusStats& stats, const Taxonomy& taxonomy) { return stats_csv(stats, taxonomy); }

std::string render_stats_svg(const CorpusStats& stats, const Taxonomy& taxonomy) {
  std::map<std::string, int> buckets;
  for (const auto& cell : heatmap_grid(stats, taxonomy)) buckets[cell.technique] = cell.bucket;
  std::ostringstream out;
  draw_matrix(
      out, taxonomy,
      [&](const Technique& technique) {
        const int bucket = buckets[technique.id];
        return CellStyle{std::string(shade_colors()[static_cast<std::size_t>(bucket)]),
                         bucket == 4 ? "#ffffff" : "#000000"};
      },
      0);
  out << "</svg>\n";
  return out.str();
}

}  // namespace bhadra
