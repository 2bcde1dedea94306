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

#ifndef HDRP_COLOR_HPP
#define HDRP_COLOR_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace hdrp
{

/// Ordered (r, g, b) channel values. The admissible range depends on what the
/// triplet holds (material color, unprocessed value, post-processed value, ...)
/// and is checked by the operations that consume it.
struct ColorTriplet
{
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr double &operator[](std::size_t k) noexcept { return k == 0 ? r : (k == 1 ? g : b); }
  constexpr double operator[](std::size_t k) const noexcept { return k == 0 ? r : (k == 1 ? g : b); }

  static constexpr ColorTriplet uniform(double x) noexcept { return {x, x, x}; }

  friend constexpr bool operator==(const ColorTriplet &, const ColorTriplet &) = default;
};

inline constexpr const char *channel_name(std::size_t k) noexcept
{
  return k == 0 ? "red" : (k == 1 ? "green" : "blue");
}

inline bool is_finite(const ColorTriplet &c) noexcept
{
  return std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b);
}

inline bool in_unit_cube(const ColorTriplet &c) noexcept
{
  for (std::size_t k = 0; k < 3; ++k)
    if (!(c[k] >= 0.0 && c[k] <= 1.0))
      return false;
  return true;
}

/// Plain 3-vector for directions, normals and CIE XYZ coordinates.
struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double &operator[](std::size_t k) noexcept { return k == 0 ? x : (k == 1 ? y : z); }
  constexpr double operator[](std::size_t k) const noexcept { return k == 0 ? x : (k == 1 ? y : z); }

  friend constexpr Vec3 operator+(const Vec3 &a, const Vec3 &b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3 &a, const Vec3 &b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, const Vec3 &a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

inline constexpr double dot(const Vec3 &a, const Vec3 &b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3 &a) noexcept { return std::sqrt(dot(a, a)); }

} // namespace hdrp

#endif // HDRP_COLOR_HPP
