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

#include "bhadra/timestamp.hpp"

#include <cstdio>

namespace bhadra {

namespace {

// Proleptic Gregorian day count since 1970-01-01 (H. Hinnant's civil algorithms).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<long long>(yoe) + era * 400 + (m <= 2);
}

bool is_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int number(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

unsigned days_in_month(long long y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

}  // namespace

Timestamp Timestamp::now() { return Timestamp(std::chrono::time_point_cast<Millis>(Clock::now())); }

Timestamp Timestamp::next_after(const Timestamp& after) {
  Timestamp current = now();
  if (current > after) return current;
  return Timestamp(after.at_ + Millis(1));
}

std::optional<Timestamp> Timestamp::parse(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ or YYYY-MM-DDTHH:MM:SS.mmmZ
  if (text.size() != 20 && text.size() != 24) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text.back() != 'Z') {
    return std::nullopt;
  }
  auto year = text.substr(0, 4), month = text.substr(5, 2), day = text.substr(8, 2);
  auto hour = text.substr(11, 2), minute = text.substr(14, 2), second = text.substr(17, 2);
  std::string_view millis = "0";
  if (text.size() == 24) {
    if (text[19] != '.') return std::nullopt;
    millis = text.substr(20, 3);
  }
  for (auto part : {year, month, day, hour, minute, second, millis}) {
    if (!is_digits(part)) return std::nullopt;
  }
  const long long y = number(year);
  const unsigned m = static_cast<unsigned>(number(month));
  const unsigned d = static_cast<unsigned>(number(day));
  const int hh = number(hour), mm = number(minute), ss = number(second);
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m) || hh > 23 || mm > 59 || ss > 59) return std::nullopt;

  const long long total_ms =
      ((days_from_civil(y, m, d) * 24 + hh) * 60 + mm) * 60000LL + ss * 1000LL + number(millis);
  return Timestamp(std::chrono::time_point<Clock, Millis>(Millis(total_ms)));
}

std::string Timestamp::str() const {
  long long total_ms = at_.time_since_epoch().count();
  long long days = total_ms / 86400000LL;
  long long rem = total_ms % 86400000LL;
  if (rem < 0) {
    rem += 86400000LL;
    --days;
  }
  long long y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", y, m, d, rem / 3600000,
                rem / 60000 % 60, rem / 1000 % 60, rem % 1000);
  return buffer;
}

}  // namespace bhadra
