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

#include "hdrp/scene.hpp"

#include "hdrp/colorspace.hpp"
#include "hdrp/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hdrp
{

namespace
{

void check_unit_triplet(const ColorTriplet &c, const char *what)
{
  for (std::size_t k = 0; k < 3; ++k)
    if (!(c[k] >= 0.0 && c[k] <= 1.0))
      throw ValidationError(std::string(what) + " " + channel_name(k) + " component " + std::to_string(c[k]) +
                            " outside [0, 1]");
}

void check_nonnegative(double x, const char *what)
{
  if (!(x >= 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(what) + " must be finite and nonnegative, got " + std::to_string(x));
}

} // namespace

void validate_unit(const Vec3 &v, const char *what, double tolerance)
{
  const double len = norm(v);
  if (!std::isfinite(len) || std::abs(len - 1.0) > tolerance)
    throw ValidationError(std::string(what) + " must be a unit vector, |v| = " + std::to_string(len));
}

void validate(const DirectionalLight &light)
{
  check_unit_triplet(light.color, "directional light color");
  check_nonnegative(light.intensity, "directional light intensity");
  validate_unit(light.direction, "light direction");
}

void validate(const AmbientLight &light)
{
  for (std::size_t k = 0; k < 3; ++k)
    check_nonnegative(light.color[k], "ambient light color");
  check_nonnegative(light.intensity, "ambient light intensity");
}

void validate(const LambertianMaterial &material) { check_unit_triplet(material.color, "material color"); }

void validate(const RenderContext &ctx)
{
  if (!(ctx.scale > 0.0) || !std::isfinite(ctx.scale))
    throw ValidationError("scale constant c must be positive");
  if (!std::isfinite(ctx.exposure))
    throw ValidationError("exposure must be finite");
}

ColorTriplet lambertian_unprocessed(const LambertianMaterial &material, const Vec3 &normal,
                                    const DirectionalLight &directional, const AmbientLight &ambient,
                                    const RenderContext &ctx)
{
  validate(material);
  validate_unit(normal, "surface normal");
  validate(directional);
  validate(ambient);
  validate(ctx);

  const double cos_theta = std::max(dot(directional.direction, normal), 0.0);
  const double gain = ctx.scale / std::exp2(ctx.exposure);
  ColorTriplet u;
  for (std::size_t k = 0; k < 3; ++k)
  {
    const double direct = directional.intensity * srgb_decode(directional.color[k]) * cos_theta / std::numbers::pi;
    const double ambient_term = ambient.intensity * ambient.color[k];
    u[k] = gain * srgb_decode(material.color[k]) * (direct + ambient_term);
  }
  return u;
}

ColorTriplet unlit_unprocessed(const ColorTriplet &material)
{
  check_unit_triplet(material, "unlit material color");
  return srgb_decode3(material);
}

Vec3 light_direction_from_rotation(const LightRotation &rotation)
{
  const double x = rotation.x * std::numbers::pi / 180.0;
  const double y = rotation.y * std::numbers::pi / 180.0;
  return {-std::cos(x) * std::sin(y), std::sin(x), -std::cos(x) * std::cos(y)};
}

ColorTriplet post_process(const ColorTriplet &u, const Tonemap &tonemap)
{
  const ColorTriplet t = tonemap.apply(u);
  if (!in_unit_cube(t))
    throw ContractError("tonemap output outside [0,1]^3");
  return srgb_encode3(t);
}

ColorTriplet unprocessed(const SceneParams &params, double scale)
{
  if (params.kind == MaterialKind::Unlit)
    return unlit_unprocessed(params.material);
  return lambertian_unprocessed(LambertianMaterial{params.material}, params.normal, params.directional, params.ambient,
                                RenderContext{params.exposure, scale});
}

ColorTriplet render(const SceneParams &params, const Tonemap &tonemap, bool quantize, double scale)
{
  const ColorTriplet v = post_process(unprocessed(params, scale), tonemap);
  return quantize ? quantize_8bit(v) : v;
}

} // namespace hdrp
