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

#include "hdrp/colorspace.hpp"

#include "hdrp/error.hpp"

#include <cmath>
#include <string>

namespace hdrp
{

namespace
{

void check_unit(double x, const char *fn)
{
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError(std::string(fn) + ": argument " + std::to_string(x) + " outside [0, 1]");
}

template <typename F> ColorTriplet apply3(const ColorTriplet &t, F f, const char *fn)
{
  ColorTriplet out;
  for (std::size_t k = 0; k < 3; ++k)
  {
    if (!(t[k] >= 0.0 && t[k] <= 1.0))
      throw DomainError(std::string(fn) + ": " + channel_name(k) + " channel " + std::to_string(t[k]) +
                        " outside [0, 1]");
    out[k] = f(t[k]);
  }
  return out;
}

} // namespace

double srgb_decode(double x)
{
  check_unit(x, "srgb_decode");
  if (x <= kSrgbDecodeBreak)
    return x / 12.92;
  return std::pow((x + 0.055) / 1.055, 2.4);
}

double srgb_encode(double y)
{
  check_unit(y, "srgb_encode");
  if (y <= kSrgbEncodeBreak)
    return y * 12.92;
  if (y == 1.0)
    return 1.0; // 1.055 - 0.055 rounds to 1 - 2^-53
  return 1.055 * std::pow(y, 1.0 / 2.4) - 0.055;
}

ColorTriplet srgb_decode3(const ColorTriplet &t) { return apply3(t, srgb_decode, "srgb_decode3"); }

ColorTriplet srgb_encode3(const ColorTriplet &t) { return apply3(t, srgb_encode, "srgb_encode3"); }

ColorTriplet quantize_8bit(const ColorTriplet &t)
{
  // std::round rounds half away from zero.
  return apply3(t, [](double x) { return std::round(x * 255.0) / 255.0; }, "quantize_8bit");
}

} // namespace hdrp
