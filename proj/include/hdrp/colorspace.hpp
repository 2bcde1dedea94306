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

#ifndef HDRP_COLORSPACE_HPP
#define HDRP_COLORSPACE_HPP

#include "hdrp/color.hpp"

namespace hdrp
{

// IEC 61966-2-1 breakpoint on the encoded side. The encode breakpoint is its
// exact image under the linear segment (0.0031308049...), so srgb_encode is an
// exact inverse on both branches; the standard's rounded 0.0031308 would send
// decoded values in (0.0031308, 0.00313080495] through the power branch.
inline constexpr double kSrgbDecodeBreak = 0.04045;
inline constexpr double kSrgbEncodeBreak = kSrgbDecodeBreak / 12.92;

/// The sRGB transfer function s: encoded [0,1] -> linear [0,1].
/// Throws DomainError outside [0,1].
double srgb_decode(double x);

/// Inverse of srgb_decode. Values at or below kSrgbEncodeBreak take the
/// linear branch. Throws DomainError outside [0,1].
double srgb_encode(double y);

/// Componentwise forms. The DomainError message names the offending channel.
ColorTriplet srgb_decode3(const ColorTriplet &t);
ColorTriplet srgb_encode3(const ColorTriplet &t);

/// Rounds each component to the nearest multiple of 1/255, ties away from zero.
ColorTriplet quantize_8bit(const ColorTriplet &t);

} // namespace hdrp

#endif // HDRP_COLORSPACE_HPP
