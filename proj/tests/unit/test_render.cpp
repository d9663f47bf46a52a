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

#include "doctest.h"

#include <regex>

#include "bhadra/render.hpp"
#include "testing.hpp"

using namespace bhadra;
using bhadra::testing::canonical;
using bhadra::testing::load_fixture;

namespace {

ComparisonResult billing() {
  const std::vector<AttackModel> models{load_fixture("billing-1"), load_fixture("billing-2"),
                                        load_fixture("billing-3")};
  return compare(models, default_palette(), canonical());
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("layer csv") {
  const std::string csv = render_layers_csv(billing(), canonical());
  CHECK(csv.rfind("technique,name,tactic,color,members\n", 0) == 0);
  CHECK(csv.find("IM.5,Billing frauds,IM,#e15759,billing-1;billing-2;billing-3\n") != std::string::npos);
  CHECK(csv.find("SP.4,") != std::string::npos);
  CHECK(csv.find("SP.3,GTP-based attacks,SP,#59a14f,billing-3\n") != std::string::npos);
  CHECK(count(csv, "\n") == billing().layers.size() + 1);
  CHECK(csv == render_layers_csv(billing(), canonical()));
}

TEST_CASE("layer svg") {
  const std::string svg = render_layers_svg(billing(), canonical());
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
  CHECK(svg.size() > 1000);
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  CHECK(count(svg, "class=\"technique\"") == 47);
  CHECK(count(svg, "class=\"tactic\"") == 8);
  CHECK(count(svg, "class=\"phase\"") == 3);
  CHECK(count(svg, "class=\"legend\"") == 4);  // three models plus overlap
  CHECK(svg.find("data-technique=\"IM.5\"><rect x=\"1270\" y=\"250\" width=\"180\" height=\"44\" fill=\"#e15759\"") !=
        std::string::npos);

  // width = 2 * margin + 8 columns; height covers the tallest column (8 rows) and the legend
  using G = SvgGeometry;
  const int width = 2 * G::kMargin + 8 * G::kColumnWidth;
  const int height = G::kMargin + G::kPhaseBandHeight + G::kHeaderHeight + 8 * G::kCellHeight +
                     4 * G::kLegendRowHeight + 2 * G::kMargin;
  CHECK(svg.find("width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) + "\"") !=
        std::string::npos);
  CHECK(svg == render_layers_svg(billing(), canonical()));
}

TEST_CASE("svg escapes text") {
  auto data = canonical().data();
  data.techniques[0].name = "A & <B> \"C\"";
  auto created = Taxonomy::create(data);
  REQUIRE(std::holds_alternative<Taxonomy>(created));
  const Taxonomy& t = std::get<Taxonomy>(created);
  const CorpusStats stats = technique_frequency(std::vector<AttackModel>{load_fixture("billing-1")}, t);
  const std::string svg = render_stats_svg(stats, t);
  CHECK(svg.find("A &amp; &lt;B&gt; &quot;C&quot;") != std::string::npos);
  CHECK(svg.find("<B>") == std::string::npos);
  const std::string csv = render_stats_csv(stats, t);
  CHECK(csv.find("IA.1,\"A & <B> \"\"C\"\"\",IA,") != std::string::npos);
}

TEST_CASE("heatmap svg uses the shade ramp") {
  const std::vector<AttackModel> corpus{load_fixture("simjacker"), load_fixture("messagetap"),
                                        load_fixture("billing-1"), load_fixture("billing-2"),
                                        load_fixture("billing-3")};
  const CorpusStats stats = technique_frequency(corpus, canonical());
  const std::string svg = render_stats_svg(stats, canonical());
  CHECK(count(svg, "class=\"technique\"") == 47);
  CHECK(count(svg, "class=\"legend\"") == 0);
  // IM.8: 3 of 5 models -> bucket 3
  const std::regex im8("data-technique=\"IM\\.8\"><rect[^>]*fill=\"([^\"]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, im8));
  CHECK(m[1] == std::string(shade_colors()[3]));
  const std::regex pe1("data-technique=\"PE\\.1\"><rect[^>]*fill=\"([^\"]+)\"");
  REQUIRE(std::regex_search(svg, m, pe1));
  CHECK(m[1] == std::string(shade_colors()[0]));
  CHECK(render_stats_csv(stats, canonical()) == stats_csv(stats, canonical()));
}

TEST_CASE("empty layer list renders a header only") {
  ComparisonResult empty;
  empty.taxonomy_version = canonical().version();
  CHECK(render_layers_csv(empty, canonical()) == "technique,name,tactic,color,members\n");
  const std::string svg = render_layers_svg(empty, canonical());
  CHECK(count(svg, "class=\"tactic\"") == 8);
}
