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

#ifndef HDRP_OPTIM_HPP
#define HDRP_OPTIM_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hdrp::optim
{

// ---------------------------------------------------------------------------
// Levenberg-Marquardt for small dense problems.

struct LmOptions
{
  std::size_t max_iterations = 500;
  // Converged when |step| <= step_tolerance * (|params| + step_tolerance).
  double step_tolerance = 1e-10;
  double initial_lambda = 1e-3;
};

struct LmResult
{
  std::vector<double> params;
  double cost = 0.0; // 0.5 * sum of squared residuals
  std::size_t iterations = 0;
  bool converged = false;
};

/// Fills `residuals` (size m) and `jacobian` (row-major m x n) at `params`.
using LmModel = std::function<void(std::span<const double> params, std::span<double> residuals,
                                   std::span<double> jacobian)>;

/// Optional feasibility test; infeasible trial steps are rejected like
/// cost-increasing ones.
using Feasible = std::function<bool(std::span<const double> params)>;

LmResult levenberg_marquardt(const LmModel &model, std::vector<double> initial, std::size_t residual_count,
                             const LmOptions &options = {}, const Feasible &feasible = {});

// ---------------------------------------------------------------------------
// Nelder-Mead downhill simplex with restarts.

struct SimplexOptions
{
  std::size_t max_evaluations = 200000;
  std::size_t restarts = 3;
  // Relative size of the initial simplex along each coordinate.
  double initial_step = 0.05;
  // Stop a run when the spread of simplex values and the simplex diameter
  // both fall below these.
  double value_tolerance = 1e-14;
  double point_tolerance = 1e-10;
};

struct SimplexResult
{
  std::vector<double> point;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` from `start` using dimension-adaptive coefficients. Each
/// restart rebuilds the simplex around the best point found so far. The start
/// point is always evaluated and is returned unless something strictly better
/// is found.
SimplexResult nelder_mead(const Objective &f, std::vector<double> start, const SimplexOptions &options = {});

} // namespace hdrp::optim

#endif // HDRP_OPTIM_HPP
