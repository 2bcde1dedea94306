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
#include "hdrp/scene.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hdrp;

namespace
{

SceneParams white_scene()
{
  SceneParams p;
  p.material = {1, 1, 1};
  p.normal = {0, 0, -1};
  p.directional.color = {1, 1, 1};
  p.directional.direction = {0, 0, -1};
  return p;
}

} // namespace

TEST(Lambertian, HandEvaluation)
{
  SceneParams p = white_scene();
  p.directional.intensity = std::numbers::pi;
  const ColorTriplet u = unprocessed(p);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(u[k], 0.822, 1e-15);
}

TEST(Lambertian, BackfacingLightContributesNothing)
{
  SceneParams p = white_scene();
  p.directional.intensity = 5.0;
  p.directional.direction = {0, 0, 1};
  p.ambient = {{1, 1, 1}, 1.0};
  const ColorTriplet u = unprocessed(p);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(u[k], 0.822, 1e-15);
}

TEST(Lambertian, ExposureHalves)
{
  SceneParams p = white_scene();
  p.material = {0.3, 0.6, 0.9};
  p.directional.intensity = 1.3;
  p.ambient = {{0.2, 0.4, 0.1}, 0.7};
  const ColorTriplet u0 = unprocessed(p);
  p.exposure = 1.0;
  const ColorTriplet u1 = unprocessed(p);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_DOUBLE_EQ(u1[k], u0[k] / 2.0);
}

TEST(Lambertian, BlackMaterialIsBlack)
{
  SceneParams p = white_scene();
  p.material = {0, 0, 0};
  p.directional.intensity = 2.0;
  p.ambient = {{1, 1, 1}, 2.0};
  EXPECT_EQ(unprocessed(p), (ColorTriplet{0, 0, 0}));
}

TEST(Lambertian, MatchesOracleOnRandomScenes)
{
  const Vec3 n{0.0, 0.6, -0.8};
  const Vec3 l{0.48, 0.0, -0.8772684879784524};
  const double cos_theta = dot(l, n);
  for (int i = 0; i < 50; ++i)
  {
    SceneParams p;
    p.material = {0.02 * i, 1.0 - 0.02 * i, 0.5};
    p.normal = n;
    p.directional = {{0.3, 0.9, 0.02 * i}, 0.04 * i, l};
    p.ambient = {{0.1, 0.5, 1.2}, 0.03 * i};
    p.exposure = i % 5 - 2;
    const ColorTriplet u = unprocessed(p, 0.822);
    for (std::size_t k = 0; k < 3; ++k)
      EXPECT_NEAR(u[k],
                  oracle::lambert(p.material[k], p.directional.color[k], p.ambient.color[k], p.directional.intensity,
                                  p.ambient.intensity, cos_theta, p.exposure, 0.822),
                  1e-14);
  }
}

TEST(Lambertian, RejectsNonUnitVectors)
{
  SceneParams p = white_scene();
  p.normal = {0, 0, -0.9};
  EXPECT_THROW(unprocessed(p), ValidationError);
  p = white_scene();
  p.directional.direction = {0, 0.1, -1};
  EXPECT_THROW(unprocessed(p), ValidationError);
}

TEST(Lambertian, RejectsOutOfRangeParameters)
{
  SceneParams p = white_scene();
  p.material = {1.1, 0, 0};
  EXPECT_THROW(unprocessed(p), ValidationError);
  p = white_scene();
  p.ambient.intensity = -1;
  EXPECT_THROW(unprocessed(p), ValidationError);
  EXPECT_THROW(unprocessed(white_scene(), 0.0), ValidationError);
}

TEST(Unlit, IsDecodedMaterial)
{
  EXPECT_EQ(unlit_unprocessed({0, 0, 0}), (ColorTriplet{0, 0, 0}));
  EXPECT_EQ(unlit_unprocessed({1, 1, 1}), (ColorTriplet{1, 1, 1}));
  EXPECT_NEAR(unlit_unprocessed({0.5, 0.5, 0.5}).g, oracle::srgb(0.5), 1e-15);
  EXPECT_THROW(unlit_unprocessed({0.5, -0.1, 0.5}), ValidationError);
}

TEST(LightDirection, Identities)
{
  const auto near = [](const Vec3 &a, const Vec3 &b) {
    return std::abs(a.x - b.x) <= 1e-12 && std::abs(a.y - b.y) <= 1e-12 && std::abs(a.z - b.z) <= 1e-12;
  };
  EXPECT_TRUE(near(light_direction_from_rotation({0, 0, 0}), {0, 0, -1}));
  EXPECT_TRUE(near(light_direction_from_rotation({90, 0, 0}), {0, 1, 0}));
  EXPECT_TRUE(near(light_direction_from_rotation({0, 90, 0}), {-1, 0, 0}));
}

TEST(LightDirection, UnitLengthAndIndependentOfZ)
{
  for (double x = -180; x <= 180; x += 15)
    for (double y = -180; y <= 180; y += 15)
    {
      const Vec3 l = light_direction_from_rotation({x, y, 0});
      EXPECT_NEAR(norm(l), 1.0, 1e-15);
      for (double z : {-90.0, 33.0, 270.0})
        EXPECT_EQ(light_direction_from_rotation({x, y, z}), l);
    }
}

TEST(PostProcess, IdentityTonemap)
{
  const Tonemap id = Tonemap::identity();
  EXPECT_EQ(post_process({0, 0, 0}, id), (ColorTriplet{0, 0, 0}));
  EXPECT_EQ(post_process({1, 1, 1}, id), (ColorTriplet{1, 1, 1}));
  EXPECT_EQ(post_process({3, 2, 1.5}, id), (ColorTriplet{1, 1, 1}));
}

TEST(PostProcess, UnlitRoundTripsMaterial)
{
  const Tonemap id = Tonemap::identity();
  for (int i = 0; i <= 100; ++i)
  {
    const double m = i / 100.0;
    const ColorTriplet v = post_process(unlit_unprocessed({m, m, m}), id);
    EXPECT_NEAR(v.r, m, 1e-12);
  }
}

TEST(Render, UnlitAndQuantized)
{
  SceneParams p;
  p.kind = MaterialKind::Unlit;
  p.material = {0.25, 0.5, 0.75};
  const ColorTriplet v = render(p, Tonemap::identity(), false);
  EXPECT_NEAR(v.r, 0.25, 1e-12);
  EXPECT_NEAR(v.g, 0.5, 1e-12);
  EXPECT_NEAR(v.b, 0.75, 1e-12);
  p.material = ColorTriplet::uniform(0.002);
  EXPECT_DOUBLE_EQ(render(p, Tonemap::identity(), true).r, 1.0 / 255.0);
}

TEST(Render, ComposesUnprocessedAndPostProcess)
{
  SceneParams p = white_scene();
  p.material = {0.4, 0.7, 0.2};
  p.directional.intensity = 1.1;
  p.ambient = {{0.3, 0.3, 0.3}, 0.4};
  const Tonemap id = Tonemap::identity();
  EXPECT_EQ(render(p, id, false), post_process(unprocessed(p), id));
}
