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

#ifndef HDRP_SCENE_HPP
#define HDRP_SCENE_HPP

#include "hdrp/color.hpp"
#include "hdrp/cube_lut.hpp"

namespace hdrp
{

inline constexpr double kDefaultScaleConstant = 0.822;
// Tolerance on |v| = 1 for directions built in-process.
inline constexpr double kUnitTolerance = 1e-9;

struct DirectionalLight
{
  ColorTriplet color;     // d, each component in [0,1]
  double intensity = 0.0; // i_d >= 0
  Vec3 direction;         // l, unit, points toward the light
};

struct AmbientLight
{
  ColorTriplet color;     // a, components >= 0
  double intensity = 0.0; // i_a >= 0
};

struct LambertianMaterial
{
  ColorTriplet color; // m, each component in [0,1]
};

struct RenderContext
{
  double exposure = 0.0;                 // e; values are divided by 2^e
  double scale = kDefaultScaleConstant;  // c > 0
};

/// Euler rotation of the directional light in degrees, as entered in the editor.
struct LightRotation
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0; // has no effect on the direction
};

enum class MaterialKind
{
  Lambertian,
  Unlit,
};

/// Everything needed to render one observation of a plane.
struct SceneParams
{
  MaterialKind kind = MaterialKind::Lambertian;
  ColorTriplet material;
  Vec3 normal{0.0, 0.0, -1.0};
  DirectionalLight directional;
  AmbientLight ambient;
  double exposure = 0.0;
};

// Throw ValidationError when the type invariants do not hold.
void validate(const DirectionalLight &light);
void validate(const AmbientLight &light);
void validate(const LambertianMaterial &material);
void validate(const RenderContext &ctx);
void validate_unit(const Vec3 &v, const char *what, double tolerance = kUnitTolerance);

/// Unprocessed value of a Lambertian surface:
///   u_k = c s(m_k) (i_d s(d_k) max(l.n, 0) / pi + i_a a_k) / 2^e
ColorTriplet lambertian_unprocessed(const LambertianMaterial &material, const Vec3 &normal,
                                    const DirectionalLight &directional, const AmbientLight &ambient,
                                    const RenderContext &ctx);

/// Unprocessed value of an unlit material: u_k = s(m_k).
ColorTriplet unlit_unprocessed(const ColorTriplet &material);

/// l = (-cos X sin Y, sin X, -cos X cos Y), angles in degrees.
Vec3 light_direction_from_rotation(const LightRotation &rotation);

/// v = s^-1(f(u)). Throws ContractError if the tonemap leaves [0,1]^3.
ColorTriplet post_process(const ColorTriplet &u, const Tonemap &tonemap);

/// Unprocessed value for either material kind; `scale` is c.
ColorTriplet unprocessed(const SceneParams &params, double scale = kDefaultScaleConstant);

/// Full pipeline: unprocessed -> post-processing -> optional 8-bit quantization.
ColorTriplet render(const SceneParams &params, const Tonemap &tonemap, bool quantize,
                    double scale = kDefaultScaleConstant);

} // namespace hdrp

#endif // HDRP_SCENE_HPP
