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

#include "bhadra/analytics.hpp"
#include "bhadra/comparison.hpp"
#include "oracle.hpp"
#include "testing.hpp"

using namespace bhadra;
using bhadra::testing::canonical;
using bhadra::testing::Gen;

namespace {

constexpr int kCases = bhadra::testing::kPropertyCases;

std::vector<std::string> universe() {
  static const auto ids = oracle::technique_ids(oracle::read(bhadra::testing::taxonomy_path().string()));
  return ids;
}

// Tag list as seen by the oracle: serialize, then read back as plain JSON.
std::vector<std::string> raw_tags(const AttackModel& m) { return oracle::tags(nlohmann::json::parse(serialize_model(m))); }

}  // namespace

TEST_CASE("taxonomy serialization round-trip") {
  Gen gen(0x7a1);
  for (int i = 0; i < kCases; ++i) {
    const TaxonomyData data = gen.taxonomy_variant(canonical().data());
    const std::string text = serialize_taxonomy(data);
    const TaxonomyData back = parse_taxonomy_document(text);
    REQUIRE(back == data);
    REQUIRE(serialize_taxonomy(back) == text);
    auto loaded = load_taxonomy(text);
    REQUIRE(std::holds_alternative<Taxonomy>(loaded));
    REQUIRE(std::get<Taxonomy>(loaded).data() == data);
  }
}

TEST_CASE("attack model serialization round-trip") {
  Gen gen(0x3d2);
  for (int i = 0; i < kCases; ++i) {
    const AttackModel m = gen.model(canonical(), "m" + std::to_string(i), 0.1 + 0.8 * (i % 10) / 10.0);
    const std::string text = serialize_model(m);
    const AttackModel back = parse_model(text);
    REQUIRE(back == m);
    REQUIRE(serialize_model(back) == text);
  }
}

TEST_CASE("tagging is idempotent") {
  Gen gen(0x51);
  const auto techniques = canonical().techniques();
  for (int i = 0; i < kCases; ++i) {
    const AttackModel m = gen.model(canonical(), "m", 0.2);
    const TechniqueTag tag{techniques[gen.below(techniques.size())].id, gen.text(), Confidence::kSuspected};
    const AttackModel once = tag_technique(m, tag, canonical());
    const AttackModel twice = tag_technique(once, tag, canonical());
    REQUIRE(twice.tags == once.tags);
    REQUIRE(twice.technique_ids() == once.technique_ids());
    REQUIRE(once.find_tag(tag.technique) != nullptr);
    REQUIRE(*once.find_tag(tag.technique) == tag);
    REQUIRE(twice.modified > once.modified);
  }
}

TEST_CASE("untag after tag restores the tag list") {
  Gen gen(0x9e);
  const auto techniques = canonical().techniques();
  for (int i = 0; i < kCases; ++i) {
    const AttackModel m = gen.model(canonical(), "m", 0.3);
    std::string fresh;
    do {
      fresh = techniques[gen.below(techniques.size())].id;
    } while (m.find_tag(fresh) && m.tags.size() < techniques.size());
    if (m.find_tag(fresh)) continue;  // every technique already tagged
    const AttackModel round = untag_technique(tag_technique(m, {fresh, gen.text(), Confidence::kConfirmed}, canonical()), fresh);
    AttackModel expected = m;
    expected.modified = round.modified;
    REQUIRE(round == expected);
  }
}

TEST_CASE("similarity: symmetry, bounds, fixed points, oracle") {
  Gen gen(0xfeed);
  const auto ids = universe();
  for (int i = 0; i < kCases; ++i) {
    AttackModel a = gen.model(canonical(), "a", gen.coin(0.1) ? 0.0 : 0.3);
    AttackModel b = gen.model(canonical(), "b", gen.coin(0.1) ? 0.0 : 0.3);
    if (a.tags.empty() && b.tags.empty()) {
      REQUIRE_THROWS_AS(similarity(a, b), Error);
      continue;
    }
    const Ratio ab = similarity(a, b);
    const Ratio ba = similarity(b, a);
    REQUIRE(ab.numerator == ba.numerator);
    REQUIRE(ab.denominator == ba.denominator);
    REQUIRE(ab.value() >= 0.0);
    REQUIRE(ab.value() <= 1.0);
    const auto [shared, either] = oracle::jaccard(ids, raw_tags(a), raw_tags(b));
    REQUIRE(ab.numerator == shared);
    REQUIRE(ab.denominator == either);

    if (!a.tags.empty()) {
      REQUIRE(similarity(a, a) == Ratio{1, 1});
      // a copy with different evidence is still the same set
      AttackModel same = a;
      same.id = "same";
      for (auto& t : same.tags) t.evidence = gen.text();
      REQUIRE(similarity(a, same) == Ratio{1, 1});
      // complement within the matrix is disjoint
      AttackModel complement = a;
      complement.id = "complement";
      complement.tags.clear();
      for (const auto& id : ids) {
        if (!a.find_tag(id)) complement.tags.push_back({id, "", Confidence::kConfirmed});
      }
      if (!complement.tags.empty()) REQUIRE(similarity(a, complement).numerator == 0);
    }
  }
}

TEST_CASE("overlap membership is invariant under input permutation") {
  Gen gen(0xab);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t n = 2 + gen.below(5);
    std::vector<AttackModel> models;
    for (std::size_t k = 0; k < n; ++k) models.push_back(gen.model(canonical(), "m" + std::to_string(k), 0.25));
    const OverlapMatrix base = overlap(models);

    std::vector<AttackModel> shuffled = models;
    std::shuffle(shuffled.begin(), shuffled.end(), gen.rng());
    const OverlapMatrix permuted = overlap(shuffled);
    REQUIRE(permuted.cells == base.cells);

    std::size_t memberships = 0, tags = 0;
    for (const auto& [technique, members] : base.cells) memberships += members.size();
    for (const auto& m : models) tags += m.tags.size();
    REQUIRE(memberships == tags);

    // every cell lists exactly the models that tag it
    for (const auto& m : models) {
      for (const auto& id : m.technique_ids()) REQUIRE(base.cells.at(id).count(m.id) == 1);
    }
    for (const auto& [technique, members] : base.cells) {
      for (const auto& member : members) {
        auto it = std::find_if(models.begin(), models.end(), [&](const AttackModel& m) { return m.id == member; });
        REQUIRE(it->find_tag(technique) != nullptr);
      }
    }

    // the overlap color marks exactly the shared cells, whatever the order
    std::vector<std::string> palette;
    for (std::size_t k = 0; k <= n; ++k) palette.push_back("#c" + std::to_string(k));
    const auto layers = build_layers(shuffled, palette, canonical());
    REQUIRE(layers.size() == base.cells.size());
    for (const auto& layer : layers) REQUIRE((layer.color == palette.back()) == (layer.members.size() > 1));
  }
}

TEST_CASE("frequency conservation against an independent recount") {
  Gen gen(0x5eed);
  const auto ids = universe();
  for (int i = 0; i < kCases; ++i) {
    const std::size_t n = 1 + gen.below(8);
    std::vector<AttackModel> corpus;
    std::vector<std::vector<std::string>> raw;
    std::size_t total_tags = 0;
    for (std::size_t k = 0; k < n; ++k) {
      corpus.push_back(gen.model(canonical(), "m" + std::to_string(k), 0.05 + 0.1 * static_cast<double>(gen.below(5))));
      raw.push_back(raw_tags(corpus.back()));
      total_tags += corpus.back().tags.size();
    }
    const CorpusStats stats = technique_frequency(corpus, canonical());
    const auto expected = oracle::recount(ids, raw);

    std::size_t total = 0;
    for (const auto& [id, count] : stats.frequency) total += count;
    REQUIRE(total == total_tags);
    std::size_t tactic_total = 0;
    for (const auto& [tactic, count] : stats.tactic_totals) tactic_total += count;
    REQUIRE(tactic_total == total_tags);

    for (const auto& [id, count] : expected) {
      const auto it = stats.frequency.find(id);
      REQUIRE((it == stats.frequency.end() ? 0 : it->second) == count);
      REQUIRE((stats.unused.count(id) == 1) == (count == 0));
    }
    for (const auto& cell : heatmap_grid(stats, canonical())) {
      REQUIRE(cell.bucket == oracle::bucket(cell.count, n));
    }
  }
}

TEST_CASE("adding a model never lowers a frequency") {
  Gen gen(0xadd);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t n = 1 + gen.below(6);
    std::vector<AttackModel> corpus;
    for (std::size_t k = 0; k < n; ++k) corpus.push_back(gen.model(canonical(), "m" + std::to_string(k), 0.2));
    const CorpusStats before = technique_frequency(corpus, canonical());
    corpus.push_back(gen.model(canonical(), "extra", 0.2));
    const CorpusStats after = technique_frequency(corpus, canonical());
    REQUIRE(after.corpus_size == before.corpus_size + 1);
    for (const auto& [id, count] : before.frequency) REQUIRE(after.frequency.at(id) >= count);
    for (const auto& id : after.unused) REQUIRE(before.unused.count(id) == 1);
  }
}

TEST_CASE("shade bucket is monotone in count") {
  Gen gen(0x77);
  for (int i = 0; i < kCases; ++i) {
    const std::size_t n = 1 + gen.below(500);
    const std::size_t c = gen.below(n + 1);
    REQUIRE(shade_bucket(c, n) <= shade_bucket(c + 1, n));
    REQUIRE(shade_bucket(c, n) == oracle::bucket(c, n));
    REQUIRE((shade_bucket(c, n) == 0) == (c == 0));
  }
}
