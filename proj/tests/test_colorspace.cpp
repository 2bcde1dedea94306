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
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace hdrp;

TEST(SrgbDecode, FixedPoints)
{
  EXPECT_EQ(srgb_decode(0.0), 0.0);
  EXPECT_EQ(srgb_decode(1.0), 1.0);
}

TEST(SrgbDecode, MatchesFormulaAtHalf)
{
  // ((0.5 + 0.055) / 1.055)^2.4
  EXPECT_NEAR(srgb_decode(0.5), 0.21404114048223255, 1e-15);
  EXPECT_NEAR(srgb_decode(0.5), oracle::srgb(0.5), 1e-15);
}

TEST(SrgbDecode, BranchesAgreeAtBreakpoint)
{
  const double linear = 0.04045 / 12.92;
  const double power = std::pow((0.04045 + 0.055) / 1.055, 2.4);
  EXPECT_NEAR(linear, power, 1e-7);
  EXPECT_DOUBLE_EQ(srgb_decode(0.04045), linear);
  EXPECT_NEAR(srgb_decode(std::nextafter(0.04045, 1.0)), linear, 1e-7);
}

TEST(SrgbDecode, MatchesOracleOnGrid)
{
  for (int i = 0; i <= 1000; ++i)
  {
    const double x = i / 1000.0;
    EXPECT_NEAR(srgb_decode(x), oracle::srgb(x), 1e-15) << x;
  }
}

TEST(SrgbDecode, RejectsOutOfDomain)
{
  EXPECT_THROW(srgb_decode(-1e-9), DomainError);
  EXPECT_THROW(srgb_decode(1.0 + 1e-9), DomainError);
  EXPECT_THROW(srgb_decode(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(SrgbEncode, InvertsLinearBranch)
{
  EXPECT_EQ(srgb_encode(0.0), 0.0);
  EXPECT_NEAR(srgb_encode(0.0031308), 0.04045, 1e-6);
  EXPECT_NEAR(srgb_encode(0.0031308), 12.92 * 0.0031308, 1e-15);
}

TEST(SrgbEncode, RoundTripIsIdentity)
{
  for (int i = 0; i <= 10000; ++i)
  {
    const double x = i / 10000.0;
    EXPECT_NEAR(srgb_encode(srgb_decode(x)), x, 1e-12) << x;
  }
  // Between the rounded breakpoint 0.0031308 and 0.04045 / 12.92, where the
  // rounded value would pick the wrong branch.
  for (double y = 0.0031308; y <= 0.04045 / 12.92; y += 1e-11)
    EXPECT_NEAR(srgb_decode(srgb_encode(y)), y, 1e-12) << y;
}

TEST(SrgbEncode, RejectsOutOfDomain)
{
  EXPECT_THROW(srgb_encode(-0.1), DomainError);
  EXPECT_THROW(srgb_encode(1.5), DomainError);
}

TEST(SrgbTriplet, ComponentwiseAndNamesChannel)
{
  const ColorTriplet d = srgb_decode3({0.5, 0.5, 0.5});
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_NEAR(d[k], oracle::srgb(0.5), 1e-15);
  EXPECT_EQ(srgb_decode3({0, 0, 0}), (ColorTriplet{0, 0, 0}));
  EXPECT_EQ(srgb_encode3({1, 1, 1}), (ColorTriplet{1, 1, 1}));
  try
  {
    srgb_decode3({0.1, 1.2, 0.3});
    FAIL() << "expected DomainError";
  }
  catch (const DomainError &e)
  {
    EXPECT_NE(std::string(e.what()).find("green"), std::string::npos) << e.what();
  }
}

TEST(Quantize, RoundsHalfAwayFromZero)
{
  EXPECT_EQ(quantize_8bit({0, 0, 0}), (ColorTriplet{0, 0, 0}));
  EXPECT_EQ(quantize_8bit({1, 1, 1}), (ColorTriplet{1, 1, 1}));
  const ColorTriplet q = quantize_8bit({0.5, 0.002, 0.001});
  EXPECT_DOUBLE_EQ(q.r, 128.0 / 255.0);
  EXPECT_DOUBLE_EQ(q.g, 1.0 / 255.0);
  EXPECT_DOUBLE_EQ(q.b, 0.0);
}

TEST(Quantize, ErrorIsAtMostHalfStep)
{
  for (int i = 0; i <= 1000; ++i)
  {
    const double x = i / 1000.0;
    EXPECT_LE(std::abs(quantize_8bit(ColorTriplet::uniform(x)).r - x), 0.5 / 255.0 + 1e-15);
  }
}
