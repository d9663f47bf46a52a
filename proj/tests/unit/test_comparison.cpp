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

#include "bhadra/comparison.hpp"
#include "oracle.hpp"
#include "testing.hpp"

using namespace bhadra;
using bhadra::testing::canonical;
using bhadra::testing::load_fixture;

namespace {

std::vector<AttackModel> billing() {
  return {load_fixture("billing-1"), load_fixture("billing-2"), load_fixture("billing-3")};
}

std::vector<std::string> raw_tags(const std::string& id) {
  return oracle::tags(oracle::read(bhadra::testing::fixture(id).string()));
}

}  // namespace

TEST_CASE("similarity of the two bundled case studies") {
  const Ratio r = similarity(load_fixture("simjacker"), load_fixture("messagetap"));
  CHECK(r.numerator == 4);
  CHECK(r.denominator == 17);
  CHECK(r == Ratio{8, 34});
  CHECK(r.value() == doctest::Approx(4.0 / 17.0).epsilon(1e-12));

  const auto universe = oracle::technique_ids(oracle::read(bhadra::testing::taxonomy_path().string()));
  const auto [shared, either] = oracle::jaccard(universe, raw_tags("simjacker"), raw_tags("messagetap"));
  CHECK(Ratio{shared, either} == r);
}

TEST_CASE("pairwise billing similarities") {
  const auto b = billing();
  CHECK(similarity(b[0], b[1]) == Ratio{1, 7});
  CHECK(similarity(b[0], b[2]) == Ratio{1, 8});
  CHECK(similarity(b[1], b[2]) == Ratio{1, 10});

  const auto universe = oracle::technique_ids(oracle::read(bhadra::testing::taxonomy_path().string()));
  const std::vector<std::string> ids{"billing-1", "billing-2", "billing-3"};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const auto [shared, either] = oracle::jaccard(universe, raw_tags(ids[i]), raw_tags(ids[j]));
      CHECK(similarity(b[i], b[j]) == Ratio{shared, either});
    }
  }
}

TEST_CASE("similarity edge cases") {
  AttackModel empty = new_model("empty", {}, canonical());
  AttackModel other = empty;
  other.id = "other";
  try {
    similarity(empty, other);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefined);
  }
  other = tag_technique(other, {"IA.1", "", Confidence::kConfirmed}, canonical());
  CHECK(similarity(empty, other) == Ratio{0, 1});
  CHECK(similarity(other, other) == Ratio{1, 1});

  other.taxonomy_version = "2.0.0";
  try {
    similarity(empty, other);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVersion);
  }
}

TEST_CASE("billing overlap") {
  const auto b = billing();
  const OverlapMatrix m = overlap(b);
  CHECK(m.models == std::vector<std::string>{"billing-1", "billing-2", "billing-3"});
  CHECK(m.cells.at("IM.5") == std::set<std::string>{"billing-1", "billing-2", "billing-3"});
  CHECK(m.cells.at("SP.4") == std::set<std::string>{"billing-1"});
  CHECK(m.cells.at("SP.3") == std::set<std::string>{"billing-3"});
  CHECK(m.cells.count("IA.2") == 0);

  const ModelDiff d = diff(b[0], b[1]);
  CHECK(d.common == std::set<std::string>{"IM.5"});
  CHECK(d.only_a == std::set<std::string>{"IA.1", "SP.4"});
  CHECK(d.only_b == std::set<std::string>{"CO.2", "DE.6", "IA.3", "IM.8"});
}

TEST_CASE("overlap preconditions") {
  const auto b = billing();
  CHECK_THROWS_AS(overlap(std::span(b).first(1)), Error);
  std::vector<AttackModel> twice{b[0], b[0]};
  try {
    overlap(twice);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kArgument);
  }
  std::vector<AttackModel> mixed{b[0], b[1]};
  mixed[1].taxonomy_version = "1.1.0";
  try {
    overlap(mixed);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVersion);
  }
}

TEST_CASE("layers") {
  const auto b = billing();
  const std::vector<std::string> palette{"#111111", "#222222", "#333333", "#ff0000"};
  const auto layers = build_layers(b, palette, canonical());

  std::map<std::string, ComparisonLayer> by_id;
  for (const auto& layer : layers) by_id[layer.technique] = layer;
  CHECK(by_id.at("SP.4").color == "#111111");
  CHECK(by_id.at("SP.3").color == "#333333");
  CHECK(by_id.at("IA.3").color == "#222222");
  CHECK(by_id.at("IM.5").color == "#ff0000");
  CHECK(by_id.at("IM.8").color == "#222222");

  // matrix order: column, then row
  for (std::size_t i = 1; i < layers.size(); ++i) {
    const auto& a = layers[i - 1].technique;
    const auto& c = layers[i].technique;
    CHECK(std::pair(canonical().column_of(a), canonical().row_of(a)) <
          std::pair(canonical().column_of(c), canonical().row_of(c)));
  }
  CHECK(layers == build_layers(b, palette, canonical()));

  SUBCASE("palette too short") {
    const std::vector<std::string> short_palette{"#1", "#2", "#3"};
    try {
      build_layers(b, short_palette, canonical());
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kArgument);
    }
  }
  SUBCASE("empty color") {
    const std::vector<std::string> bad{"#1", "", "#3", "#4"};
    CHECK_THROWS_AS(build_layers(b, bad, canonical()), Error);
  }
  SUBCASE("models pinned elsewhere") {
    auto moved = b;
    for (auto& m : moved) m.taxonomy_version = "2.0.0";
    CHECK_THROWS_AS(build_layers(moved, palette, canonical()), Error);
  }
}

TEST_CASE("comparison json round-trip") {
  const auto b = billing();
  const ComparisonResult result = compare(b, default_palette(), canonical());
  const auto doc = comparison_to_json(result, canonical());
  CHECK(doc["overlap_color"] == "#e15759");
  CHECK(doc["cells"]["SP.4"] == nlohmann::ordered_json::array({"billing-1"}));
  CHECK(doc["layers"][0]["technique"] == "IA.1");
  CHECK(doc["layers"][0]["tactic"] == "IA");

  const ComparisonResult back = comparison_from_json(nlohmann::ordered_json::parse(doc.dump()));
  CHECK(back.taxonomy_version == result.taxonomy_version);
  CHECK(back.overlap == result.overlap);
  CHECK(back.palette == result.palette);
  CHECK(back.layers == result.layers);
  CHECK(comparison_to_json(back, canonical()).dump() == doc.dump());
}

TEST_CASE("identical and disjoint models") {
  const AttackModel m = load_fixture("simjacker");
  AttackModel copy = m;
  copy.id = "simjacker-copy";
  const std::vector<AttackModel> pair{m, copy};
  const OverlapMatrix matrix = overlap(pair);
  CHECK(matrix.cells.size() == 12);
  for (const auto& [technique, members] : matrix.cells) CHECK(members.size() == 2);
  for (const auto& layer : build_layers(pair, default_palette(), canonical())) CHECK(layer.color == "#e15759");

  const ModelDiff same = diff(m, copy);
  CHECK(same.only_a.empty());
  CHECK(same.only_b.empty());
  CHECK(same.common == m.technique_ids());

  const AttackModel other = load_fixture("billing-1");
  const ModelDiff disjoint = diff(m, other);
  CHECK(disjoint.common.empty());
  CHECK(similarity(m, other) == Ratio{0, 1});
  for (const auto& layer : build_layers(std::vector<AttackModel>{m, other}, default_palette(), canonical())) {
    CHECK(layer.color != "#e15759");
  }
}

TEST_CASE("diff mirrors and partitions") {
  const auto b = billing();
  const ModelDiff d23 = diff(b[1], b[2]);
  CHECK(d23.common.count("IM.5") == 1);
  const ModelDiff d32 = diff(b[2], b[1]);
  CHECK(d23.only_a == d32.only_b);
  CHECK(d23.only_b == d32.only_a);
  CHECK(d23.common == d32.common);
  std::set<std::string> all = d23.only_a;
  all.insert(d23.only_b.begin(), d23.only_b.end());
  all.insert(d23.common.begin(), d23.common.end());
  CHECK(all.size() == d23.only_a.size() + d23.only_b.size() + d23.common.size());
  std::set<std::string> expected = b[1].technique_ids();
  for (const auto& id : b[2].technique_ids()) expected.insert(id);
  CHECK(all == expected);
}
