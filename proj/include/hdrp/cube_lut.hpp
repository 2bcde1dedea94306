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

#ifndef HDRP_CUBE_LUT_HPP
#define HDRP_CUBE_LUT_HPP

#include "hdrp/color.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdrp
{

inline constexpr std::size_t kDefaultGridSize = 32;
// Knots below this 1-based index play no role in External tonemapping.
inline constexpr std::size_t kFirstActiveKnot = 3;

enum class KnotSource
{
  Delta,     // estimates from delta-cube sweeps
  Optimized, // estimates from optimizing model predictions
};

/// Shared per-axis input coordinates u*_i of the External tonemap grid.
///
/// Only indices kFirstActiveKnot..size() carry values; they must be strictly
/// increasing and positive. Indices are 1-based throughout, matching the
/// delta_MM.cube naming.
class KnotGrid
{
public:
  /// `active` holds u*_3..u*_n, so the grid size is active.size() + 2.
  explicit KnotGrid(std::vector<double> active);

  static KnotGrid defaults(KnotSource source);

  std::size_t size() const noexcept { return active_.size() + kFirstActiveKnot - 1; }
  std::size_t first_active() const noexcept { return kFirstActiveKnot; }
  std::size_t active_count() const noexcept { return active_.size(); }

  /// u*_index for kFirstActiveKnot <= index <= size().
  double at(std::size_t index) const;
  std::span<const double> active() const noexcept { return active_; }

  double lower() const noexcept { return active_.front(); }
  double upper() const noexcept { return active_.back(); }

  friend bool operator==(const KnotGrid &, const KnotGrid &) = default;

private:
  std::vector<double> active_;
};

/// CSV with header `index,u` and one row per active knot.
KnotGrid read_knots_csv(std::istream &in);
void write_knots_csv(std::ostream &out, const KnotGrid &knots);

/// n x n x n grid of output triplets, red index fastest:
/// entry (i, j, k) lives at i + n*(j + n*k), all indices 0-based.
class CubeLUT
{
public:
  CubeLUT(std::size_t size, std::vector<ColorTriplet> data);

  std::size_t size() const noexcept { return size_; }

  const ColorTriplet &at(std::size_t i, std::size_t j, std::size_t k) const noexcept
  {
    return data_[i + size_ * (j + size_ * k)];
  }

  std::span<const ColorTriplet> data() const noexcept { return data_; }

  std::optional<std::string> title;
  ColorTriplet domain_min{0.0, 0.0, 0.0};
  ColorTriplet domain_max{1.0, 1.0, 1.0};

private:
  std::size_t size_;
  std::vector<ColorTriplet> data_;
};

struct CubeParseResult
{
  CubeLUT lut;
  // One entry per clamped out-of-range component.
  std::vector<std::string> warnings;
};

/// Reads the .cube text format (3D variant only). Throws FormatError on
/// structural problems and UnsupportedError for LUT_1D_SIZE files.
CubeParseResult parse_cube(std::string_view text);
CubeParseResult parse_cube(std::istream &in);

std::string serialize_cube(const CubeLUT &lut);

/// t_ijk = (i == m, j == m, k == m) for the 1-based knot index m.
CubeLUT make_delta_cube(std::size_t m, std::size_t size = kDefaultGridSize);

/// "delta_07.cube" for m = 7.
std::string delta_cube_filename(std::size_t m);

/// Separable cube with t_ijk = (g(0, u*_i), g(1, u*_j), g(2, u*_k)); the
/// first argument of g is the channel. Inactive knots take the value at the
/// first active knot. Outputs must lie in [0,1].
template <typename F> CubeLUT make_separable_cube(const KnotGrid &knots, F g);

/// Separable cube for g(u) = min((u / scale)^exponent, 1).
CubeLUT make_power_cube(const KnotGrid &knots, double exponent, double scale = 1.0);

/// Trilinear interpolation of `lut` over the active knots u*_3..u*_n given in
/// `active_knots` (size lut.size() - 2, strictly increasing). Each input is
/// clamped into [u*_3, u*_n] first. No validation beyond the size check.
ColorTriplet interpolate_cube(std::span<const double> active_knots, const CubeLUT &lut, const ColorTriplet &u);

/// Tonemapping f: [0,inf)^3 -> [0,1]^3. Identity ("None") clamps to the unit
/// cube; External interpolates a cube over the active knots, clamping each
/// input into [u*_3, u*_n] first.
class Tonemap
{
public:
  static Tonemap identity();
  static Tonemap external(KnotGrid knots, CubeLUT lut);

  bool is_identity() const noexcept { return !lut_; }
  const KnotGrid *knots() const noexcept { return knots_.get(); }
  const CubeLUT *lut() const noexcept { return lut_.get(); }

  ColorTriplet apply(const ColorTriplet &u) const;

private:
  std::shared_ptr<const KnotGrid> knots_;
  std::shared_ptr<const CubeLUT> lut_;
};

inline ColorTriplet apply_tonemap(const Tonemap &f, const ColorTriplet &u) { return f.apply(u); }

// --- implementation details ---

template <typename F> CubeLUT make_separable_cube(const KnotGrid &knots, F g)
{
  const std::size_t n = knots.size();
  std::vector<ColorTriplet> axis(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    const double u = knots.at(i + 1 < kFirstActiveKnot ? kFirstActiveKnot : i + 1);
    for (std::size_t c = 0; c < 3; ++c)
      axis[i][c] = g(c, u);
  }
  std::vector<ColorTriplet> data(n * n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        data[i + n * (j + n * k)] = {axis[i].r, axis[j].g, axis[k].b};
  return CubeLUT(n, std::move(data));
}

} // namespace hdrp

#endif // HDRP_CUBE_LUT_HPP
