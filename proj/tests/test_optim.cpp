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

#include "hdrp/optim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace hdrp::optim;

TEST(LevenbergMarquardt, RecoversExponentialDecay)
{
  // y = 3 exp(-0.7 t), noiseless.
  std::vector<double> t, y;
  for (int i = 0; i < 20; ++i)
  {
    t.push_back(0.25 * i);
    y.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  const LmModel model = [&](std::span<const double> p, std::span<double> r, std::span<double> J) {
    for (std::size_t i = 0; i < t.size(); ++i)
    {
      const double e = std::exp(-p[1] * t[i]);
      r[i] = p[0] * e - y[i];
      J[2 * i] = e;
      J[2 * i + 1] = -p[0] * t[i] * e;
    }
  };
  const LmResult res = levenberg_marquardt(model, {1.0, 0.1}, t.size());
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.params[0], 3.0, 1e-9);
  EXPECT_NEAR(res.params[1], 0.7, 1e-9);
  EXPECT_LT(res.cost, 1e-20);
}

TEST(LevenbergMarquardt, RespectsFeasibility)
{
  // Minimum of (p - (-1))^2 lies outside p > 0; steps there are rejected.
  const LmModel model = [](std::span<const double> p, std::span<double> r, std::span<double> J) {
    r[0] = p[0] + 1.0;
    J[0] = 1.0;
  };
  const LmResult res = levenberg_marquardt(model, {2.0}, 1, {}, [](std::span<const double> p) { return p[0] > 0.0; });
  EXPECT_GT(res.params[0], 0.0);
}

TEST(NelderMead, MinimizesRosenbrock)
{
  const Objective f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  SimplexOptions opt;
  opt.initial_step = 0.5;
  const SimplexResult res = nelder_mead(f, {-1.2, 1.0}, opt);
  EXPECT_NEAR(res.point[0], 1.0, 1e-6);
  EXPECT_NEAR(res.point[1], 1.0, 1e-6);
  EXPECT_LE(res.evaluations, opt.max_evaluations);
}

TEST(NelderMead, HighDimensionalQuadratic)
{
  const std::size_t n = 30;
  const Objective f = [n](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += (1.0 + i) * std::pow(x[i] - 0.1 * i, 2);
    return s;
  };
  const SimplexResult res = nelder_mead(f, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_NEAR(res.point[i], 0.1 * i, 1e-5) << i;
}

TEST(NelderMead, OptimalStartIsReturned)
{
  const Objective f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const SimplexResult res = nelder_mead(f, {0.0, 0.0});
  EXPECT_EQ(res.value, 0.0);
  EXPECT_EQ(res.point, (std::vector<double>{0.0, 0.0}));
}

TEST(NelderMead, EvaluationCapIsHonored)
{
  std::size_t calls = 0;
  const Objective f = [&](std::span<const double> x) {
    ++calls;
    return std::pow(x[0] - 3.0, 2) + std::pow(x[1] + 2.0, 2) + std::pow(x[2], 2);
  };
  SimplexOptions opt;
  opt.max_evaluations = 50;
  const SimplexResult res = nelder_mead(f, {0.0, 0.0, 1.0}, opt);
  EXPECT_LE(calls, 50u);
  EXPECT_EQ(res.evaluations, calls);
  EXPECT_FALSE(res.converged);
}
