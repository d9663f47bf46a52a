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

#include "json_support.hpp"

#include <fstream>
#include <sstream>

namespace bhadra::detail {

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename J>
J parse_any(std::string_view text) {
  try {
    return J::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte is one past the offending character
    std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    std::string message = e.what();
    if (auto pos = message.find("syntax error"); pos != std::string::npos) message = message.substr(pos);
    throw Error(ErrorCode::kParse, message, line_column(text, byte));
  }
}

}  // namespace

Json parse_json(std::string_view text) { return parse_any<Json>(text); }
OrderedJson parse_ordered_json(std::string_view text) { return parse_any<OrderedJson>(text); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed", path);
  return buffer.str();
}

}  // namespace bhadra::detail
