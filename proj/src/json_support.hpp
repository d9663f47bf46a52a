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

// Field-level JSON access that reports the dotted path of whatever is missing
// or mistyped.

#include <optional>
#include <string>
#include <string_view>

#include "bhadra/error.hpp"
#include "json.hpp"

namespace bhadra::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parses text; syntax errors become Error{kParse} with a "line L, column C" locus.
Json parse_json(std::string_view text);
OrderedJson parse_ordered_json(std::string_view text);

std::string read_text_file(const std::string& path);

template <typename J>
class BasicField {
 public:
  BasicField(const J& node, std::string path) : node_(node), path_(std::move(path)) {}

  const J& node() const { return node_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const { throw Error(ErrorCode::kParse, message, path_); }

  BasicField object() const {
    if (!node_.is_object()) fail("expected an object");
    return *this;
  }

  bool has(std::string_view key) const { return node_.is_object() && node_.contains(key); }

  BasicField at(std::string_view key) const {
    std::string sub = path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) throw Error(ErrorCode::kParse, "missing required field", sub);
    return BasicField(*it, std::move(sub));
  }

  BasicField index(std::size_t i) const { return BasicField(node_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.template get<std::string>();
  }

  long long integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.template get<long long>();
  }

  const J& array() const {
    if (!node_.is_array()) fail("expected an array");
    return node_;
  }

  std::size_t size() const { return array().size(); }

  std::string string_at(std::string_view key) const { return at(key).string(); }

  std::string string_or(std::string_view key, std::string fallback) const {
    return has(key) ? at(key).string() : std::move(fallback);
  }

 private:
  const J& node_;
  std::string path_;
};

using Field = BasicField<Json>;
using OrderedField = BasicField<OrderedJson>;

}  // namespace bhadra::detail
