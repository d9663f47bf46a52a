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

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace bhadra {

/// UTC instant with millisecond resolution, rendered as
/// "YYYY-MM-DDTHH:MM:SS.mmmZ". Fixed-width text, so string order is time order.
class Timestamp {
 public:
  using Clock = std::chrono::system_clock;
  using Millis = std::chrono::milliseconds;

  Timestamp() = default;
  explicit Timestamp(std::chrono::time_point<Clock, Millis> at) : at_(at) {}

  static Timestamp now();
  static std::optional<Timestamp> parse(std::string_view text);
  /// now(), or one millisecond after `after` if the clock has not moved past it.
  static Timestamp next_after(const Timestamp& after);

  std::string str() const;
  std::chrono::time_point<Clock, Millis> time_point() const { return at_; }

  auto operator<=>(const Timestamp&) const = default;

 private:
  std::chrono::time_point<Clock, Millis> at_{};
};

}  // namespace bhadra
