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

#include "hdrp/cube_lut.hpp"

#include "hdrp/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace hdrp
{

namespace
{

// u*_3 .. u*_32 as estimated from delta-cube sweeps.
const std::vector<double> kDeltaKnots = {
  0.0002606, 0.003104, 0.007305, 0.01288, 0.02056, 0.03061, 0.04468, 0.06393, 0.09056, 0.1245,
  0.1711,    0.2354,   0.3236,   0.4406,  0.5938,  0.8165,  1.111,   1.498,   2.039,   2.776,
  3.780,     5.094,    6.935,    9.441,   12.72,   17.32,   23.35,   31.78,   43.27,   58.90,
};

// u*_3 .. u*_32 as estimated by optimizing model predictions.
const std::vector<double> kOptimizedKnots = {
  1.657e-9, 0.002830, 0.007137, 0.01269, 0.02051, 0.03086, 0.04479, 0.06444, 0.08989, 0.1252,
  0.1726,   0.2370,   0.3253,   0.4422,  0.6039,  0.8207,  1.104,   1.495,   2.032,   2.756,
  3.738,    5.083,    6.864,    9.347,   12.62,   17.18,   23.24,   31.48,   42.75,   57.66,
};

constexpr std::size_t kMaxCubeSize = 256;

} // namespace

// ---------------------------------------------------------------------------
// KnotGrid

KnotGrid::KnotGrid(std::vector<double> active) : active_(std::move(active))
{
  if (active_.size() < 2)
    throw ValidationError("knot grid needs at least two active knots");
  for (std::size_t a = 0; a < active_.size(); ++a)
  {
    if (!std::isfinite(active_[a]) || active_[a] <= 0.0)
      throw ValidationError("knot u*_" + std::to_string(a + kFirstActiveKnot) + " must be positive and finite");
    if (a > 0 && !(active_[a] > active_[a - 1]))
      throw ValidationError("knots must be strictly increasing; u*_" + std::to_string(a + kFirstActiveKnot) +
                            " <= u*_" + std::to_string(a + kFirstActiveKnot - 1));
  }
}

KnotGrid KnotGrid::defaults(KnotSource source)
{
  return KnotGrid(source == KnotSource::Delta ? kDeltaKnots : kOptimizedKnots);
}

double KnotGrid::at(std::size_t index) const
{
  if (index < kFirstActiveKnot || index > size())
    throw InvalidArgument("knot index " + std::to_string(index) + " outside active range " +
                          std::to_string(kFirstActiveKnot) + ".." + std::to_string(size()));
  return active_[index - kFirstActiveKnot];
}

KnotGrid read_knots_csv(std::istream &in)
{
  const auto lines = detail::read_content_lines(in);
  if (lines.empty())
    throw FormatError("knot CSV is empty");
  const auto header = detail::split_csv(lines.front().text);
  if (header.size() != 2 || header[0].text != "index" || header[1].text != "u")
    throw FormatError("knot CSV header must be 'index,u'", lines.front().number);

  std::vector<double> values;
  for (std::size_t r = 1; r < lines.size(); ++r)
  {
    const auto &line = lines[r];
    const auto fields = detail::split_csv(line.text);
    if (fields.size() != 2)
      throw FormatError("expected 2 fields", line.number);
    const long long index = detail::parse_integer(fields[0], line.number);
    const long long expected = static_cast<long long>(kFirstActiveKnot + values.size());
    if (index != expected)
      throw FormatError("expected knot index " + std::to_string(expected) + ", found " + std::to_string(index),
                        line.number, fields[0].column);
    values.push_back(detail::parse_double(fields[1], line.number));
  }
  return KnotGrid(std::move(values));
}

void write_knots_csv(std::ostream &out, const KnotGrid &knots)
{
  out << "index,u\n";
  for (std::size_t i = knots.first_active(); i <= knots.size(); ++i)
    out << i << ',' << detail::format_double(knots.at(i)) << '\n';
}

// ---------------------------------------------------------------------------
// CubeLUT

CubeLUT::CubeLUT(std::size_t size, std::vector<ColorTriplet> data) : size_(size), data_(std::move(data))
{
  if (size_ < 2 || size_ > kMaxCubeSize)
    throw ValidationError("cube size " + std::to_string(size_) + " outside [2, " + std::to_string(kMaxCubeSize) + "]");
  if (data_.size() != size_ * size_ * size_)
    throw ValidationError("cube of size " + std::to_string(size_) + " needs " + std::to_string(size_ * size_ * size_) +
                          " entries, got " + std::to_string(data_.size()));
  for (std::size_t e = 0; e < data_.size(); ++e)
    if (!in_unit_cube(data_[e]))
      throw ValidationError("cube entry " + std::to_string(e) + " outside [0,1]^3");
}

namespace
{

std::string unquote_title(std::string_view rest, std::size_t line)
{
  rest = detail::trim(rest);
  if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"')
    return std::string(rest.substr(1, rest.size() - 2));
  throw FormatError("TITLE must be a quoted string", line);
}

ColorTriplet parse_triplet(const std::vector<detail::Token> &toks, std::size_t first, std::size_t line)
{
  return {detail::parse_double(toks[first], line), detail::parse_double(toks[first + 1], line),
          detail::parse_double(toks[first + 2], line)};
}

} // namespace

CubeParseResult parse_cube(std::istream &in)
{
  std::optional<std::string> title;
  ColorTriplet domain_min{0, 0, 0};
  ColorTriplet domain_max{1, 1, 1};
  std::size_t n = 0;
  std::size_t expected = 0;
  std::vector<ColorTriplet> data;
  std::vector<std::string> warnings;
  std::size_t last_line = 0;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw))
  {
    ++line;
    const auto text = detail::trim(raw);
    if (text.empty() || text.front() == '#')
      continue;
    last_line = line;
    const auto toks = detail::split_whitespace(text);
    const char c0 = toks[0].text.front();
    const bool alpha = (c0 >= 'A' && c0 <= 'Z') || (c0 >= 'a' && c0 <= 'z') || c0 == '_';
    // After the size line, a 3-token row is data even if a token is not a
    // number ("nan 0 0"), so that it reports a parse error with its column.
    const bool known = toks[0].text == "TITLE" || toks[0].text == "LUT_1D_SIZE" || toks[0].text == "LUT_3D_SIZE" ||
                       toks[0].text == "DOMAIN_MIN" || toks[0].text == "DOMAIN_MAX";
    const bool keyword = alpha && (known || n == 0 || toks.size() != 3);

    if (keyword)
    {
      if (!data.empty())
        throw FormatError("keyword '" + std::string(toks[0].text) + "' after data rows", line, toks[0].column);
      const auto kw = toks[0].text;
      if (kw == "TITLE")
      {
        title = unquote_title(text.substr(5), line);
      }
      else if (kw == "LUT_1D_SIZE")
      {
        throw UnsupportedError("1D LUTs are not supported", line);
      }
      else if (kw == "LUT_3D_SIZE")
      {
        if (toks.size() != 2)
          throw FormatError("LUT_3D_SIZE takes one integer", line);
        const long long v = detail::parse_integer(toks[1], line);
        if (v < 2 || v > static_cast<long long>(kMaxCubeSize))
          throw FormatError("LUT_3D_SIZE " + std::to_string(v) + " outside [2, " + std::to_string(kMaxCubeSize) + "]",
                            line, toks[1].column);
        n = static_cast<std::size_t>(v);
        expected = n * n * n;
        data.reserve(expected);
      }
      else if (kw == "DOMAIN_MIN" || kw == "DOMAIN_MAX")
      {
        if (toks.size() != 4)
          throw FormatError(std::string(kw) + " takes three numbers", line);
        (kw == "DOMAIN_MIN" ? domain_min : domain_max) = parse_triplet(toks, 1, line);
      }
      else
      {
        warnings.push_back("line " + std::to_string(line) + ": ignoring unknown keyword '" + std::string(kw) + "'");
      }
      continue;
    }

    if (n == 0)
      throw FormatError("data row before LUT_3D_SIZE", line, toks[0].column);
    if (toks.size() != 3)
      throw FormatError("data row must hold 3 numbers, found " + std::to_string(toks.size()), line);
    if (data.size() == expected)
      throw FormatError("more than the " + std::to_string(expected) + " data rows declared by LUT_3D_SIZE", line);
    ColorTriplet t = parse_triplet(toks, 0, line);
    for (std::size_t k = 0; k < 3; ++k)
    {
      if (t[k] < 0.0 || t[k] > 1.0)
      {
        warnings.push_back("line " + std::to_string(line) + ": " + channel_name(k) + " value " +
                           detail::format_double(t[k], 9) + " clamped to [0,1]");
        t[k] = std::clamp(t[k], 0.0, 1.0);
      }
    }
    data.push_back(t);
  }

  if (n == 0)
    throw FormatError("missing LUT_3D_SIZE");
  if (data.size() != expected)
    throw FormatError("truncated cube: expected " + std::to_string(expected) + " data rows, found " +
                        std::to_string(data.size()),
                      last_line);

  CubeLUT lut(n, std::move(data));
  lut.title = std::move(title);
  lut.domain_min = domain_min;
  lut.domain_max = domain_max;
  return {std::move(lut), std::move(warnings)};
}

CubeParseResult parse_cube(std::string_view text)
{
  std::istringstream in{std::string(text)};
  return parse_cube(in);
}

std::string serialize_cube(const CubeLUT &lut)
{
  std::string out;
  out.reserve(lut.data().size() * 36 + 128);
  if (lut.title)
    out += "TITLE \"" + *lut.title + "\"\n";
  out += "LUT_3D_SIZE " + std::to_string(lut.size()) + "\n";
  const auto triplet_line = [](const ColorTriplet &t) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", t.r, t.g, t.b);
    return std::string(buf);
  };
  if (lut.domain_min != ColorTriplet{0, 0, 0})
    out += "DOMAIN_MIN " + triplet_line(lut.domain_min);
  if (lut.domain_max != ColorTriplet{1, 1, 1})
    out += "DOMAIN_MAX " + triplet_line(lut.domain_max);
  for (const auto &t : lut.data())
    out += triplet_line(t);
  return out;
}

CubeLUT make_delta_cube(std::size_t m, std::size_t size)
{
  if (m < 1 || m > size)
    throw InvalidArgument("delta index " + std::to_string(m) + " outside 1.." + std::to_string(size));
  std::vector<ColorTriplet> data(size * size * size);
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t j = 0; j < size; ++j)
      for (std::size_t i = 0; i < size; ++i)
        data[i + size * (j + size * k)] = {i + 1 == m ? 1.0 : 0.0, j + 1 == m ? 1.0 : 0.0, k + 1 == m ? 1.0 : 0.0};
  CubeLUT lut(size, std::move(data));
  lut.title = "delta " + std::to_string(m);
  return lut;
}

std::string delta_cube_filename(std::size_t m)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "delta_%02zu.cube", m);
  return buf;
}

CubeLUT make_power_cube(const KnotGrid &knots, double exponent, double scale)
{
  if (!(exponent > 0.0) || !(scale > 0.0))
    throw InvalidArgument("power cube needs positive exponent and scale");
  return make_separable_cube(knots, [&](std::size_t, double u) { return std::min(std::pow(u / scale, exponent), 1.0); });
}

// ---------------------------------------------------------------------------
// Tonemap

Tonemap Tonemap::identity() { return Tonemap{}; }

Tonemap Tonemap::external(KnotGrid knots, CubeLUT lut)
{
  if (knots.size() != lut.size())
    throw ValidationError("knot grid size " + std::to_string(knots.size()) + " does not match cube size " +
                          std::to_string(lut.size()));
  Tonemap f;
  f.knots_ = std::make_shared<const KnotGrid>(std::move(knots));
  f.lut_ = std::make_shared<const CubeLUT>(std::move(lut));
  return f;
}

namespace
{

struct AxisCell
{
  std::size_t lo; // 0-based cube index
  double weight;  // of the upper neighbour
};

AxisCell locate(std::span<const double> knots, double u)
{
  const double x = std::clamp(u, knots.front(), knots.back());
  // First knot strictly greater than x; the cell is [it-1, it].
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  if (it == knots.end())
    --it;
  const std::size_t hi = static_cast<std::size_t>(it - knots.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - knots[lo]) / (knots[hi] - knots[lo]);
  return {lo + kFirstActiveKnot - 1, w};
}

} // namespace

ColorTriplet interpolate_cube(std::span<const double> knots, const CubeLUT &lut, const ColorTriplet &u)
{
  if (knots.size() + kFirstActiveKnot - 1 != lut.size())
    throw InvalidArgument("interpolate_cube: knot count does not match cube size");
  const AxisCell cr = locate(knots, u.r);
  const AxisCell cg = locate(knots, u.g);
  const AxisCell cb = locate(knots, u.b);

  ColorTriplet out;
  for (std::size_t dk = 0; dk < 2; ++dk)
  {
    const double wk = dk ? cb.weight : 1.0 - cb.weight;
    for (std::size_t dj = 0; dj < 2; ++dj)
    {
      const double wj = dj ? cg.weight : 1.0 - cg.weight;
      for (std::size_t di = 0; di < 2; ++di)
      {
        const double wi = di ? cr.weight : 1.0 - cr.weight;
        const double w = wi * wj * wk;
        if (w == 0.0)
          continue;
        const ColorTriplet &t = lut.at(cr.lo + di, cg.lo + dj, cb.lo + dk);
        out.r += w * t.r;
        out.g += w * t.g;
        out.b += w * t.b;
      }
    }
  }
  // Convex combination of [0,1] values; guard the last ulp.
  for (std::size_t k = 0; k < 3; ++k)
    out[k] = std::clamp(out[k], 0.0, 1.0);
  return out;
}

ColorTriplet Tonemap::apply(const ColorTriplet &u) const
{
  for (std::size_t k = 0; k < 3; ++k)
    if (!(u[k] >= 0.0) || !std::isfinite(u[k]))
      throw DomainError(std::string("tonemap: ") + channel_name(k) + " input must be finite and nonnegative");

  if (!lut_)
    return {std::min(u.r, 1.0), std::min(u.g, 1.0), std::min(u.b, 1.0)};
  return interpolate_cube(knots_->active(), *lut_, u);
}

} // namespace hdrp
