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

#include "hdrp/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hdrp::optim
{

LmResult levenberg_marquardt(const LmModel &model, std::vector<double> initial, std::size_t residual_count,
                             const LmOptions &options, const Feasible &feasible)
{
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const std::size_t n = initial.size();
  const std::size_t m = residual_count;
  if (n == 0 || m < n)
    throw InvalidArgument("levenberg_marquardt: need at least as many residuals as parameters");

  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(initial.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd r(m);
  Matrix J(m, n);
  Eigen::VectorXd r_trial(m);
  Matrix J_trial(m, n);

  const auto eval = [&](const Eigen::VectorXd &x, Eigen::VectorXd &res, Matrix &jac) {
    model(std::span<const double>(x.data(), n), std::span<double>(res.data(), m),
          std::span<double>(jac.data(), m * n));
  };

  eval(p, r, J);
  double cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(cost))
    throw FitError("levenberg_marquardt: non-finite residuals at the initial point");

  double lambda = options.initial_lambda;
  LmResult result;
  for (std::size_t it = 0; it < options.max_iterations; ++it)
  {
    result.iterations = it + 1;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() == 0.0)
    {
      result.converged = true;
      break;
    }

    bool accepted = false;
    Eigen::VectorXd step;
    for (int tries = 0; tries < 60; ++tries)
    {
      Eigen::MatrixXd damped = A;
      for (std::size_t i = 0; i < n; ++i)
        damped(i, i) += lambda * std::max(A(i, i), 1e-300);
      step = damped.ldlt().solve(-g);
      const Eigen::VectorXd trial = p + step;
      if (step.allFinite() && (!feasible || feasible(std::span<const double>(trial.data(), n))))
      {
        eval(trial, r_trial, J_trial);
        const double trial_cost = 0.5 * r_trial.squaredNorm();
        if (std::isfinite(trial_cost) && trial_cost <= cost)
        {
          p = trial;
          r.swap(r_trial);
          J.swap(J_trial);
          cost = trial_cost;
          lambda = std::max(lambda * 0.3, 1e-15);
          accepted = true;
          break;
        }
      }
      lambda *= 10.0;
    }

    const double tol = options.step_tolerance;
    if (!accepted || step.norm() <= tol * (p.norm() + tol))
    {
      // A rejected step means no descent is possible at machine precision.
      result.converged = true;
      break;
    }
  }

  result.params.assign(p.data(), p.data() + n);
  result.cost = cost;
  return result;
}

SimplexResult nelder_mead(const Objective &f, std::vector<double> start, const SimplexOptions &options)
{
  const std::size_t n = start.size();
  if (n == 0)
    throw InvalidArgument("nelder_mead: empty start point");

  const double dn = static_cast<double>(n);
  // Dimension-adaptive coefficients (Gao & Han); reduce to the classic
  // (1, 2, 0.5, 0.5) for n = 2.
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 0.5 / dn;
  const double delta = 1.0 - 1.0 / dn;

  SimplexResult best;
  best.point = start;
  best.value = f(start);
  best.evaluations = 1;
  if (!std::isfinite(best.value))
    throw InvalidArgument("nelder_mead: objective is not finite at the start point");

  std::vector<std::vector<double>> simplex(n + 1);
  std::vector<double> values(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  // Past the budget, trial points score +inf without calling f, so no move
  // accepts them and the run ends at the next loop test.
  const auto evaluate = [&](const std::vector<double> &x) {
    if (best.evaluations >= options.max_evaluations)
      return std::numeric_limits<double>::infinity();
    ++best.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  for (std::size_t run = 0; run <= options.restarts; ++run)
  {
    simplex[0] = best.point;
    values[0] = best.value;
    for (std::size_t i = 0; i < n; ++i)
    {
      simplex[i + 1] = best.point;
      simplex[i + 1][i] += options.initial_step;
      values[i + 1] = evaluate(simplex[i + 1]);
    }

    bool run_converged = false;
    while (best.evaluations < options.max_evaluations)
    {
      std::iota(order.begin(), order.end(), 0);
      // Stable so that the incumbent keeps its rank on ties.
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[n - 1];

      double diameter = 0.0;
      for (std::size_t v = 0; v <= n; ++v)
      {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          d2 += (simplex[v][i] - simplex[lo][i]) * (simplex[v][i] - simplex[lo][i]);
        diameter = std::max(diameter, std::sqrt(d2));
      }
      double scale = 0.0;
      for (double x : simplex[lo])
        scale = std::max(scale, std::abs(x));
      if (values[hi] - values[lo] <= options.value_tolerance * (1.0 + std::abs(values[lo])) &&
          diameter <= options.point_tolerance * (1.0 + scale))
      {
        run_converged = true;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v)
        if (v != hi)
          for (std::size_t i = 0; i < n; ++i)
            centroid[i] += simplex[v][i];
      for (double &c : centroid)
        c /= dn;

      for (std::size_t i = 0; i < n; ++i)
        trial[i] = centroid[i] + alpha * (centroid[i] - simplex[hi][i]);
      const double f_reflect = evaluate(trial);

      if (f_reflect < values[lo])
      {
        for (std::size_t i = 0; i < n; ++i)
          trial2[i] = centroid[i] + beta * (trial[i] - centroid[i]);
        const double f_expand = evaluate(trial2);
        if (f_expand < f_reflect)
        {
          simplex[hi] = trial2;
          values[hi] = f_expand;
        }
        else
        {
          simplex[hi] = trial;
          values[hi] = f_reflect;
        }
        continue;
      }
      if (f_reflect < values[second])
      {
        simplex[hi] = trial;
        values[hi] = f_reflect;
        continue;
      }

      const bool outside = f_reflect < values[hi];
      for (std::size_t i = 0; i < n; ++i)
        trial2[i] = outside ? centroid[i] + gamma * (trial[i] - centroid[i])
                            : centroid[i] - gamma * (centroid[i] - simplex[hi][i]);
      const double f_contract = evaluate(trial2);
      if (f_contract < (outside ? f_reflect : values[hi]))
      {
        simplex[hi] = trial2;
        values[hi] = f_contract;
        continue;
      }

      for (std::size_t v = 0; v <= n; ++v)
      {
        if (v == lo)
          continue;
        for (std::size_t i = 0; i < n; ++i)
          simplex[v][i] = simplex[lo][i] + delta * (simplex[v][i] - simplex[lo][i]);
        values[v] = evaluate(simplex[v]);
      }
    }

    const auto it = std::min_element(values.begin(), values.end());
    const std::size_t arg = static_cast<std::size_t>(it - values.begin());
    const bool improved = *it < best.value;
    if (improved)
    {
      best.value = *it;
      best.point = simplex[arg];
    }
    best.converged = run_converged;
    // A restart that found nothing better confirms the minimum.
    if ((run_converged && !improved && run > 0) || best.evaluations >= options.max_evaluations)
      break;
  }
  return best;
}

} // namespace hdrp::optim
