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

#include "bhadra/timestamp.hpp"

using bhadra::Timestamp;

TEST_CASE("parse and render") {
  auto t = Timestamp::parse("2026-10-16T08:30:05.123Z");
  REQUIRE(t.has_value());
  CHECK(t->str() == "2026-10-16T08:30:05.123Z");

  auto whole = Timestamp::parse("2019-09-12T00:00:00Z");
  REQUIRE(whole.has_value());
  CHECK(whole->str() == "2019-09-12T00:00:00.000Z");

  auto epoch = Timestamp::parse("1970-01-01T00:00:00.000Z");
  REQUIRE(epoch.has_value());
  CHECK(*epoch == Timestamp{});

  auto leap = Timestamp::parse("2024-02-29T23:59:59.999Z");
  REQUIRE(leap.has_value());
  CHECK(leap->str() == "2024-02-29T23:59:59.999Z");
}

TEST_CASE("rejects malformed text") {
  for (const char* bad : {"", "2026-10-16", "2026-10-16T08:30:05", "2026-13-01T00:00:00Z", "2026-02-30T00:00:00Z",
                          "2025-02-29T00:00:00Z", "2026-10-16T24:00:00Z", "2026-10-16T08:60:00Z",
                          "2026-10-16 08:30:05Z", "2026-10-16T08:30:05.12Z", "2026-10-16T08:30:05.123",
                          "2026-10-16T08:30:05.123+01:00", "x026-10-16T08:30:05Z"}) {
    CAPTURE(bad);
    CHECK_FALSE(Timestamp::parse(bad).has_value());
  }
}

TEST_CASE("string order is time order") {
  const auto a = *Timestamp::parse("2026-01-01T00:00:00.999Z");
  const auto b = *Timestamp::parse("2026-01-01T00:00:01.000Z");
  CHECK(a < b);
  CHECK(a.str() < b.str());
}

TEST_CASE("next_after is strictly later") {
  const auto future = *Timestamp::parse("2999-01-01T00:00:00.000Z");
  CHECK(Timestamp::next_after(future).str() == "2999-01-01T00:00:00.001Z");

  const auto past = *Timestamp::parse("2000-01-01T00:00:00.000Z");
  const auto next = Timestamp::next_after(past);
  CHECK(next > past);

  Timestamp last = Timestamp::now();
  for (int i = 0; i < 1000; ++i) {
    const Timestamp t = Timestamp::next_after(last);
    CHECK(t > last);
    last = t;
  }
}
