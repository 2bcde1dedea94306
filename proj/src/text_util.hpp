/*
 * Copyright 2026 The hdrp-model Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Small line-oriented text helpers shared by the CSV and .cube readers.

#ifndef HDRP_SRC_TEXT_UTIL_HPP
#define HDRP_SRC_TEXT_UTIL_HPP

#include "hdrp/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace hdrp::detail
{

inline std::string_view trim(std::string_view s)
{
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

struct Token
{
  std::string_view text;
  std::size_t column; // 1-based
};

inline std::vector<Token> split_whitespace(std::string_view line)
{
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    const std::size_t b = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    if (i > b)
      out.push_back({line.substr(b, i - b), b + 1});
  }
  return out;
}

inline std::vector<Token> split_csv(std::string_view line)
{
  std::vector<Token> out;
  std::size_t b = 0;
  for (;;)
  {
    const std::size_t e = line.find(',', b);
    const std::string_view field = line.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b);
    const std::string_view t = trim(field);
    const std::size_t lead = t.empty() ? 0 : static_cast<std::size_t>(t.data() - field.data());
    out.push_back({t, b + lead + 1});
    if (e == std::string_view::npos)
      break;
    b = e + 1;
  }
  return out;
}

// Parses a finite double filling the whole token, else throws FormatError.
inline double parse_double(const Token &tok, std::size_t line)
{
  std::string_view s = tok.text;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw FormatError("expected a finite number, found '" + std::string(tok.text) + "'", line, tok.column);
  return v;
}

inline long long parse_integer(const Token &tok, std::size_t line)
{
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (tok.text.empty() || ec != std::errc() || ptr != tok.text.data() + tok.text.size())
    throw FormatError("expected an integer, found '" + std::string(tok.text) + "'", line, tok.column);
  return v;
}

// Shortest round-trippable representation is not needed; 17 significant
// digits always round-trips a double.
inline std::string format_double(double v, int digits = 17)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Reads non-empty, non-comment ('#') lines with their 1-based line numbers.
struct NumberedLine
{
  std::string text;
  std::size_t number;
};

inline std::vector<NumberedLine> read_content_lines(std::istream &in)
{
  std::vector<NumberedLine> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line))
  {
    ++n;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    out.push_back({std::string(t), n});
  }
  return out;
}

} // namespace hdrp::detail

#endif // HDRP_SRC_TEXT_UTIL_HPP
