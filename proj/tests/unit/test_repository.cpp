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

#include <fstream>
#include <thread>

#include "bhadra/repository.hpp"
#include "testing.hpp"

using namespace bhadra;
using bhadra::testing::canonical;
using bhadra::testing::load_fixture;
using bhadra::testing::TempDir;
namespace fs = std::filesystem;

namespace {

void seed(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(bhadra::testing::corpus_dir())) {
    fs::copy_file(entry.path(), dir / entry.path().filename());
  }
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("opening a seeded directory") {
  TempDir dir;
  seed(dir.path());
  Repository repo(dir.path(), canonical());
  CHECK(repo.size() == 5);
  CHECK(repo.warnings().empty());
  CHECK(repo.contains("simjacker"));
  CHECK(repo.contains("SimJacker"));
  REQUIRE(repo.get("billing-2").has_value());
  CHECK(*repo.get("billing-2") == load_fixture("billing-2"));
  CHECK_FALSE(repo.get("nope").has_value());

  const auto all = repo.all();
  REQUIRE(all.size() == 5);
  CHECK(all.front().id == "billing-1");
  CHECK(all.back().id == "simjacker");
}

TEST_CASE("bad documents are skipped with a warning") {
  TempDir dir;
  seed(dir.path());
  write(dir.path() / "broken.json", "{ not json");
  AttackModel invalid = load_fixture("billing-1");
  invalid.id = "invalid-final";
  invalid.tags.clear();
  write(dir.path() / "invalid-final.json", serialize_model(invalid));
  AttackModel foreign = load_fixture("billing-1");
  foreign.id = "foreign";
  foreign.taxonomy_version = "2.0.0";
  write(dir.path() / "foreign.json", serialize_model(foreign));
  AttackModel dup = load_fixture("billing-1");
  write(dir.path() / "zz-copy.json", serialize_model(dup));
  write(dir.path() / "readme.txt", "ignored");
  fs::create_directory(dir.path() / "sub.json");

  Repository repo(dir.path(), canonical());
  CHECK(repo.size() == 5);
  CHECK(repo.warnings().size() == 4);
}

TEST_CASE("missing root") {
  try {
    Repository repo("/nonexistent/bhadra-repo", canonical());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("put, get, remove") {
  TempDir dir;
  Repository repo(dir.path(), canonical());
  CHECK(repo.size() == 0);

  AttackModel draft = new_model("Fresh attack", {AdversaryClass::kEvilMobileUser}, canonical());
  const AttackModel stored = repo.put(draft);
  CHECK(stored.id == "fresh-attack");
  CHECK(stored.modified >= draft.modified);
  CHECK(*repo.get("fresh-attack") == stored);
  CHECK(fs::exists(dir.path() / "fresh-attack.json"));

  // a reopened repository sees the same bytes
  Repository reopened(dir.path(), canonical());
  CHECK(*reopened.get("fresh-attack") == stored);

  AttackModel edited = tag_technique(stored, {"IA.1", "", Confidence::kSuspected}, canonical());
  const AttackModel second = repo.put(edited, stored.modified);
  CHECK(second.modified > stored.modified);
  CHECK(second.created == stored.created);
  CHECK(second.tags.size() == 1);

  SUBCASE("stale precondition") {
    try {
      repo.put(edited, stored.modified);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConflict);
    }
    CHECK(*repo.get("fresh-attack") == second);
  }
  SUBCASE("precondition on a missing model") {
    AttackModel other = new_model("Other", {}, canonical());
    try {
      repo.put(other, other.modified);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConflict);
    }
    CHECK_FALSE(repo.contains("other"));
  }
  SUBCASE("remove") {
    CHECK(repo.remove("fresh-attack"));
    CHECK_FALSE(repo.remove("fresh-attack"));
    CHECK_FALSE(repo.contains("fresh-attack"));
    CHECK_FALSE(fs::exists(dir.path() / "fresh-attack.json"));
  }
  SUBCASE("no temp files left behind") {
    for (const auto& entry : fs::directory_iterator(dir.path())) CHECK(entry.path().extension() == ".json");
  }
}

TEST_CASE("put rejects what the index would not load") {
  TempDir dir;
  Repository repo(dir.path(), canonical());
  AttackModel m = load_fixture("billing-1");
  m.tags.clear();
  try {
    repo.put(m);
    FAIL("expected throw");
  } catch (const ValidationFailure& e) {
    CHECK(e.report().has("MISSING_INITIAL_ACCESS"));
  }
  m = load_fixture("billing-1");
  m.id = "Bad Id";
  try {
    repo.put(m);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kArgument);
  }
  m = load_fixture("billing-1");
  m.taxonomy_version = "3.0.0";
  try {
    repo.put(m);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVersion);
  }
  CHECK(repo.size() == 0);
}

TEST_CASE("queries") {
  TempDir dir;
  seed(dir.path());
  Repository repo(dir.path(), canonical());

  auto ids = [](const std::vector<ModelSummary>& summaries) {
    std::vector<std::string> out;
    for (const auto& s : summaries) out.push_back(s.id);
    return out;
  };

  CHECK(ids(repo.query({})) ==
        std::vector<std::string>{"billing-1", "billing-2", "billing-3", "messagetap", "simjacker"});
  CHECK(ids(repo.query({.technique = "IM.8"})) == std::vector<std::string>{"billing-2", "messagetap", "simjacker"});
  CHECK(ids(repo.query({.impact = "IM.5"})) == std::vector<std::string>{"billing-1", "billing-2", "billing-3"});
  CHECK(ids(repo.query({.adversary = AdversaryClass::kLawEnforcementGovernment})) ==
        std::vector<std::string>{"messagetap", "simjacker"});
  CHECK(ids(repo.query({.technique = "CO.2", .adversary = AdversaryClass::kHumanInsider})) ==
        std::vector<std::string>{"messagetap"});
  CHECK(ids(repo.query({.text = "GTP"})) == std::vector<std::string>{"billing-3"});
  CHECK(ids(repo.query({.text = "gtp"})) == std::vector<std::string>{"billing-3"});
  CHECK(repo.query({.technique = "PE.1"}).empty());

  const auto summary = repo.query({.text = "simjacker"});
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].tag_count == 12);
  CHECK(summary[0].status == ModelStatus::kFinal);

  for (const QueryFilter& bad : {QueryFilter{.technique = "XX.1"}, QueryFilter{.impact = "IA.1"},
                                QueryFilter{.impact = "IM.99"}}) {
    try {
      repo.query(bad);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kArgument);
    }
  }
}

TEST_CASE("concurrent writers on one id: exactly one precondition wins") {
  TempDir dir;
  Repository repo(dir.path(), canonical());
  const AttackModel base = repo.put(new_model("Contended", {}, canonical()));

  constexpr int kThreads = 8;
  std::atomic<int> wins{0}, conflicts{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < kThreads; ++i) {
    threads.emplace_back([&, i] {
      AttackModel edit = base;
      edit.summary = "writer " + std::to_string(i);
      try {
        repo.put(edit, base.modified);
        ++wins;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kConflict) ++conflicts;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(wins == 1);
  CHECK(conflicts == kThreads - 1);
}

TEST_CASE("concurrent writers on distinct ids and readers") {
  TempDir dir;
  Repository repo(dir.path(), canonical());
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      for (int k = 0; k < 10; ++k) repo.put(new_model("w" + std::to_string(i) + " n" + std::to_string(k), {}, canonical()));
    });
  }
  threads.emplace_back([&] {
    for (int k = 0; k < 200; ++k) {
      for (const auto& s : repo.query({})) CHECK_FALSE(s.id.empty());
    }
  });
  for (auto& t : threads) t.join();
  CHECK(repo.size() == 80);
  Repository reopened(dir.path(), canonical());
  CHECK(reopened.size() == 80);
  CHECK(reopened.warnings().empty());
}

TEST_CASE("index snapshot and get(put(m))") {
  TempDir dir;
  seed(dir.path());
  Repository repo(dir.path(), canonical());
  const auto index = repo.index();
  REQUIRE(index.size() == 5);
  CHECK(index.at("billing-3").title == "Billing fraud 3: GTP session hijack");
  CHECK(index.at("billing-3").path == dir.path() / "billing-3.json");
  CHECK(index.at("billing-3").modified.str() == "2026-10-16T00:00:00.000Z");

  AttackModel m = load_fixture("simjacker");
  m.id = "simjacker-2";
  const AttackModel stored = repo.put(m);
  CHECK(*repo.get(stored.id) == stored);
  CHECK(repo.index().at("simjacker-2").modified == stored.modified);
  AttackModel expected = m;
  expected.modified = stored.modified;
  CHECK(stored == expected);
}

TEST_CASE("adding a filter clause never adds results") {
  TempDir dir;
  seed(dir.path());
  Repository repo(dir.path(), canonical());
  bhadra::testing::Gen gen(0x42);
  const auto techniques = canonical().techniques();
  std::vector<std::string> impacts;
  for (const auto& t : canonical().techniques_of("IM")) impacts.push_back(t.id);
  for (int i = 0; i < 200; ++i) {
    QueryFilter f;
    if (gen.coin()) f.technique = techniques[gen.below(techniques.size())].id;
    if (gen.coin()) f.adversary = kAllAdversaryClasses[gen.below(kAllAdversaryClasses.size())];
    const auto before = repo.query(f);
    QueryFilter narrower = f;
    narrower.impact = impacts[gen.below(impacts.size())];
    if (gen.coin()) narrower.text = gen.coin() ? "billing" : "a";
    for (const auto& s : repo.query(narrower)) {
      CHECK(std::find(before.begin(), before.end(), s) != before.end());
    }
  }
}
