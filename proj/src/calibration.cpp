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


#include "hdrp/calibration.hpp"

#include "hdrp/colorspace.hpp"
#include "hdrp/error.hpp"
#include "hdrp/optim.hpp"
#include "hdrp/random.hpp"
#include "hdrp/scene.hpp"
#include "text_util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <type_traits>

namespace hdrp
{

// ---------------------------------------------------------------------------
// Gamma correction

double GammaCorrectionSpec::w(std::size_t channel) const
{
  if (channel > 2)
    throw InvalidArgument("channel index out of range");
  return std::visit(
    [channel](const auto &d) -> double {
      if constexpr (std::is_same_v<std::decay_t<decltype(d)>, AchromaticDisplay>)
        return d.w();
      else
        return d.weights[channel];
    },
    display);
}

double GammaCorrectionSpec::cutoff(std::size_t channel) const
{
  const double wk = w(channel);
  return r * wk / (1.0 + wk);
}

const GammaActivation &GammaCorrectionSpec::activation(std::size_t channel) const
{
  if (channel > 2)
    throw InvalidArgument("channel index out of range");
  if (const auto *a = std::get_if<AchromaticDisplay>(&display))
    return a->activation;
  return std::get<ChromaticDisplay>(display).activations[channel];
}

void validate(const GammaCorrectionSpec &spec)
{
  if (!(spec.r > 0.0) || !std::isfinite(spec.r))
    throw ValidationError("range constant r must be positive and finite");
  std::visit([](const auto &d) { validate(d); }, spec.display);
  for (std::size_t k = 0; k < 3; ++k)
  {
    const double wk = spec.w(k);
    if (!(wk >= 0.0) || !std::isfinite(wk))
      throw ValidationError(std::string("background ratio w for channel ") + channel_name(k) +
                            " must be finite and nonnegative, got " + std::to_string(wk));
  }
}

double gamma_tonemap_channel(const GammaCorrectionSpec &spec, std::size_t channel, double u)
{
  if (!(u >= 0.0) || !std::isfinite(u))
    throw DomainError("gamma tonemap input must be finite and nonnegative, got " + std::to_string(u));
  const double wk = spec.w(channel);
  const double x = std::clamp((1.0 + wk) * u / spec.r - wk, 0.0, 1.0);
  return srgb_decode(spec.activation(channel).inverse(x));
}

double gamma_tonemap_achromatic(const GammaCorrectionSpec &spec, double u)
{
  if (!std::holds_alternative<AchromaticDisplay>(spec.display))
    throw InvalidArgument("gamma_tonemap_achromatic needs an achromatic display");
  return gamma_tonemap_channel(spec, 0, u);
}

ColorTriplet gamma_tonemap_chromatic(const GammaCorrectionSpec &spec, const ColorTriplet &u)
{
  return {gamma_tonemap_channel(spec, 0, u.r), gamma_tonemap_channel(spec, 1, u.g),
          gamma_tonemap_channel(spec, 2, u.b)};
}

std::vector<double> refinement_grid(const KnotGrid &knots, double r)
{
  const double lo = knots.lower();
  if (!(r > lo))
    throw InvalidArgument("range constant r must exceed the first active knot " + detail::format_double(lo));
  std::vector<double> grid;
  grid.reserve(kRefinementGridPoints + 2);
  grid.push_back(0.0);
  const double a = std::log(lo);
  const double b = std::log(r);
  for (std::size_t i = 0; i < kRefinementGridPoints; ++i)
  {
    const double t = static_cast<double>(i) / static_cast<double>(kRefinementGridPoints - 1);
    grid.push_back(i + 1 == kRefinementGridPoints ? r : std::exp(a + t * (b - a)));
  }
  grid.push_back(r);
  return grid;
}

double correction_sse(const GammaCorrectionSpec &spec, const KnotGrid &knots, const CubeLUT &lut)
{
  double sse = 0.0;
  for (double x : refinement_grid(knots, spec.r))
  {
    const ColorTriplet t = interpolate_cube(knots.active(), lut, {x, x, x});
    for (std::size_t k = 0; k < 3; ++k)
    {
      const double d = t[k] - gamma_tonemap_channel(spec, k, x);
      sse += d * d;
    }
  }
  return sse;
}

namespace
{

CubeLUT separable_from_axes(const KnotGrid &knots, const std::array<std::vector<double>, 3> &axis)
{
  // axis[c] holds values for the active knots; inactive ones copy knot 3.
  const std::size_t n = knots.size();
  const std::size_t skip = kFirstActiveKnot - 1;
  const auto value = [&](std::size_t c, std::size_t i) { return axis[c][i < skip ? 0 : i - skip]; };
  std::vector<ColorTriplet> data(n * n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        data[i + n * (j + n * k)] = {value(0, i), value(1, j), value(2, k)};
  return CubeLUT(n, std::move(data));
}

// min |A x - y|^2 subject to 0 <= x <= 1, for the columns listed in `vars`;
// other entries of x stay fixed. Starts from the feasible x passed in.
// Returns false if the active-set iteration does not settle.
bool bounded_least_squares(const Eigen::MatrixXd &A, const Eigen::VectorXd &y, const std::vector<Eigen::Index> &vars,
                           Eigen::VectorXd &x)
{
  enum class State { Free, Lower, Upper };
  std::vector<State> state(vars.size(), State::Free);
  const double eps = 1e-12;

  for (std::size_t iter = 0; iter < 10 * vars.size() + 10; ++iter)
  {
    std::vector<std::size_t> free_idx;
    for (std::size_t v = 0; v < vars.size(); ++v)
      if (state[v] == State::Free)
        free_idx.push_back(v);

    if (!free_idx.empty())
    {
      // Residual target with every non-free column held at its current value.
      Eigen::VectorXd rhs = y;
      Eigen::VectorXd held = x;
      for (std::size_t v : free_idx)
        held[vars[v]] = 0.0;
      rhs -= A * held;
      Eigen::MatrixXd Af(A.rows(), static_cast<Eigen::Index>(free_idx.size()));
      for (std::size_t f = 0; f < free_idx.size(); ++f)
        Af.col(static_cast<Eigen::Index>(f)) = A.col(vars[free_idx[f]]);
      const Eigen::VectorXd z = Af.colPivHouseholderQr().solve(rhs);

      // Step from x toward z, stopping at the first bound.
      double alpha = 1.0;
      for (std::size_t f = 0; f < free_idx.size(); ++f)
      {
        const double cur = x[vars[free_idx[f]]];
        const double tgt = z[static_cast<Eigen::Index>(f)];
        if (tgt < 0.0 && cur > tgt)
          alpha = std::min(alpha, cur / (cur - tgt));
        else if (tgt > 1.0 && tgt > cur)
          alpha = std::min(alpha, (1.0 - cur) / (tgt - cur));
      }
      alpha = std::max(alpha, 0.0);
      bool hit = false;
      for (std::size_t f = 0; f < free_idx.size(); ++f)
      {
        double &xv = x[vars[free_idx[f]]];
        xv += alpha * (z[static_cast<Eigen::Index>(f)] - xv);
        if (alpha < 1.0 && xv <= eps)
        {
          xv = 0.0;
          state[free_idx[f]] = State::Lower;
          hit = true;
        }
        else if (alpha < 1.0 && xv >= 1.0 - eps)
        {
          xv = 1.0;
          state[free_idx[f]] = State::Upper;
          hit = true;
        }
      }
      if (alpha < 1.0)
      {
        if (!hit)
          return false;
        continue;
      }
    }

    // Unconstrained optimum on the free set is feasible; release the bound
    // variable whose gradient most strongly points into the box.
    const Eigen::VectorXd grad = A.transpose() * (A * x - y);
    double worst = 1e-14 * (1.0 + grad.lpNorm<Eigen::Infinity>());
    std::size_t release = vars.size();
    for (std::size_t v = 0; v < vars.size(); ++v)
    {
      const double g = grad[vars[v]];
      const double pull = state[v] == State::Lower ? -g : state[v] == State::Upper ? g : 0.0;
      if (pull > worst)
      {
        worst = pull;
        release = v;
      }
    }
    if (release == vars.size())
      return true;
    state[release] = State::Free;
  }
  return false;
}

} // namespace

CorrectionCube build_correction_cube(const GammaCorrectionSpec &spec, const KnotGrid &knots, bool refine)
{
  validate(spec);
  const std::span<const double> active = knots.active();
  const std::size_t na = active.size();

  std::array<std::vector<double>, 3> point;
  for (std::size_t c = 0; c < 3; ++c)
    for (double u : active)
      point[c].push_back(gamma_tonemap_channel(spec, c, u));

  CorrectionCube out{separable_from_axes(knots, point), 0.0, 0.0, false, {}};
  out.sse_point = correction_sse(spec, knots, out.lut);
  out.sse_final = out.sse_point;
  if (!refine)
    return out;

  const std::vector<double> grid = refinement_grid(knots, spec.r);
  const auto rows = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(na));
  for (Eigen::Index g = 0; g < rows; ++g)
  {
    const double x = std::clamp(grid[static_cast<std::size_t>(g)], active.front(), active.back());
    auto it = std::upper_bound(active.begin(), active.end(), x);
    if (it == active.end())
      --it;
    const auto hi = static_cast<Eigen::Index>(it - active.begin());
    const double wt = (x - active[static_cast<std::size_t>(hi - 1)]) /
                      (active[static_cast<std::size_t>(hi)] - active[static_cast<std::size_t>(hi - 1)]);
    A(g, hi - 1) += 1.0 - wt;
    A(g, hi) += wt;
  }

  // Knots beyond r (or otherwise never bracketing a grid point) keep their
  // point values.
  std::vector<Eigen::Index> vars;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    if (A.col(j).cwiseAbs().maxCoeff() > 0.0)
      vars.push_back(j);

  std::array<std::vector<double>, 3> refined;
  for (std::size_t c = 0; c < 3; ++c)
  {
    Eigen::VectorXd y(rows);
    for (Eigen::Index g = 0; g < rows; ++g)
      y[g] = gamma_tonemap_channel(spec, c, grid[static_cast<std::size_t>(g)]);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(point[c].data(), static_cast<Eigen::Index>(na));
    if (!bounded_least_squares(A, y, vars, x))
    {
      out.warnings.push_back(std::string("refinement did not settle for channel ") + channel_name(c) +
                             "; keeping the point construction");
      return out;
    }
    refined[c].assign(x.data(), x.data() + na);
    for (double &v : refined[c])
      v = std::clamp(v, 0.0, 1.0);
  }

  CubeLUT candidate = separable_from_axes(knots, refined);
  const double sse = correction_sse(spec, knots, candidate);
  if (sse <= out.sse_point)
  {
    out.lut = std::move(candidate);
    out.sse_final = sse;
    out.refined = true;
  }
  else
  {
    out.warnings.push_back("refinement increased the grid error; keeping the point construction");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scale constant

ScaleEstimate estimate_scale_constant(const std::vector<SceneSample> &samples)
{
  std::size_t lambertian = 0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  ScaleEstimate est;
  for (const SceneSample &s : samples)
  {
    if (s.params.kind != MaterialKind::Lambertian)
      continue;
    ++lambertian;
    const ColorTriplet predicted = unprocessed(s.params, 1.0);
    for (std::size_t k = 0; k < 3; ++k)
    {
      if (s.v[k] >= 1.0)
      {
        ++est.points_saturated;
        continue;
      }
      const double actual = srgb_decode(s.v[k]);
      sxy += actual * predicted[k];
      sxx += actual * actual;
      syy += predicted[k] * predicted[k];
      ++est.points_used;
    }
  }
  if (lambertian < kMinScaleSamples)
    throw FitError("insufficient data: need at least " + std::to_string(kMinScaleSamples) +
                   " Lambertian samples, got " + std::to_string(lambertian));
  if (!(sxx > 0.0) || !(sxy > 0.0))
    throw FitError("degenerate data: predicted or actual values are all zero");
  est.slope = sxy / sxx;
  est.c = 1.0 / est.slope;
  est.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  return est;
}

// ---------------------------------------------------------------------------
// Delta sweeps

void validate(const DeltaSweep &sweep)
{
  if (sweep.m < 1)
    throw ValidationError("sweep knot index must be at least 1");
  if (sweep.u.size() != sweep.t.size())
    throw ValidationError("sweep " + std::to_string(sweep.m) + ": input and output counts differ");
  if (sweep.u.empty())
    throw ValidationError("sweep " + std::to_string(sweep.m) + " is empty");
  for (std::size_t i = 0; i < sweep.u.size(); ++i)
  {
    if (!(sweep.u[i] >= 0.0) || !std::isfinite(sweep.u[i]))
      throw ValidationError("sweep " + std::to_string(sweep.m) + ": input must be finite and nonnegative");
    if (i > 0 && !(sweep.u[i] > sweep.u[i - 1]))
      throw ValidationError("sweep " + std::to_string(sweep.m) + ": inputs must be strictly increasing");
    if (!(sweep.t[i] >= 0.0 && sweep.t[i] <= 1.0))
      throw ValidationError("sweep " + std::to_string(sweep.m) + ": outputs must lie in [0, 1]");
  }
}

std::vector<DeltaSweep> read_sweeps_csv(std::istream &in)
{
  const auto lines = detail::read_content_lines(in);
  if (lines.empty())
    throw FormatError("missing header `m,u,t`", 1);
  const auto header = detail::split_csv(lines[0].text);
  if (header.size() != 3 || header[0].text != "m" || header[1].text != "u" || header[2].text != "t")
    throw FormatError("expected header `m,u,t`", lines[0].number);

  std::vector<DeltaSweep> sweeps;
  std::map<std::size_t, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i)
  {
    const auto &ln = lines[i];
    const auto f = detail::split_csv(ln.text);
    if (f.size() != 3)
      throw FormatError("expected 3 fields, found " + std::to_string(f.size()), ln.number);
    const long long m = detail::parse_integer(f[0], ln.number);
    if (m < 1)
      throw FormatError("knot index must be positive", ln.number, f[0].column);
    const auto mi = static_cast<std::size_t>(m);
    if (sweeps.empty() || sweeps.back().m != mi)
    {
      if (seen.count(mi))
        throw FormatError("rows for sweep " + std::to_string(mi) + " are not contiguous", ln.number);
      seen[mi] = sweeps.size();
      sweeps.push_back({mi, {}, {}});
    }
    sweeps.back().u.push_back(detail::parse_double(f[1], ln.number));
    sweeps.back().t.push_back(detail::parse_double(f[2], ln.number));
  }
  for (const auto &s : sweeps)
  {
    try
    {
      validate(s);
    }
    catch (const ValidationError &e)
    {
      throw FormatError(e.what());
    }
  }
  return sweeps;
}

void write_sweeps_csv(std::ostream &out, const std::vector<DeltaSweep> &sweeps)
{
  out << "m,u,t\n";
  for (const auto &s : sweeps)
  {
    validate(s);
    for (std::size_t i = 0; i < s.u.size(); ++i)
      out << s.m << ',' << detail::format_double(s.u[i]) << ',' << detail::format_double(s.t[i]) << '\n';
  }
}

const char *to_string(DeltaStatus status)
{
  switch (status)
  {
  case DeltaStatus::Estimated:
    return "estimated";
  case DeltaStatus::NoResponse:
    return "no response";
  case DeltaStatus::Anomaly:
    return "anomaly";
  }
  return "unknown";
}

namespace
{

struct Line
{
  double intercept = 0.0;
  double slope = 0.0;
};

Line fit_line(const std::vector<double> &x, const std::vector<double> &y)
{
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double b = sxx > 0.0 ? sxy / sxx : 0.0;
  return {my - b * mx, b};
}

constexpr double kNoResponseLevel = 1e-6;
constexpr double kFlankLow = 0.2;
constexpr double kFlankHigh = 0.8;
// Allowed dip against the trend, as a fraction of the peak, before a sweep is
// called non-unimodal.
constexpr double kUnimodalSlack = 0.02;

DeltaKnotEstimate estimate_one(const DeltaSweep &s)
{
  DeltaKnotEstimate est;
  est.m = s.m;
  const double peak = *std::max_element(s.t.begin(), s.t.end());
  if (peak <= kNoResponseLevel)
  {
    est.status = DeltaStatus::NoResponse;
    est.note = "all outputs are zero";
    return est;
  }

  // Plateau at the peak level: [first, last].
  const double top = peak * (1.0 - 1e-9);
  std::size_t first = s.t.size(), last = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] >= top)
    {
      first = std::min(first, i);
      last = i;
    }
  const double argmax_u = 0.5 * (s.u[first] + s.u[last]);

  bool unimodal = true;
  for (std::size_t i = 1; i <= first; ++i)
    if (s.t[i] < s.t[i - 1] - kUnimodalSlack * peak)
      unimodal = false;
  for (std::size_t i = last + 1; i < s.t.size(); ++i)
    if (s.t[i] > s.t[i - 1] + kUnimodalSlack * peak)
      unimodal = false;
  for (std::size_t i = first; i <= last; ++i)
    if (s.t[i] < peak * (1.0 - kUnimodalSlack))
      unimodal = false;
  if (!unimodal)
  {
    est.status = DeltaStatus::Anomaly;
    est.estimate = argmax_u;
    est.note = "response is not unimodal; using the argmax";
    return est;
  }

  std::vector<double> rx, ry, fx, fy;
  for (std::size_t i = 0; i < first; ++i)
    if (s.t[i] >= kFlankLow * peak && s.t[i] <= kFlankHigh * peak)
    {
      rx.push_back(s.u[i]);
      ry.push_back(s.t[i]);
    }
  for (std::size_t i = last + 1; i < s.t.size(); ++i)
    if (s.t[i] >= kFlankLow * peak && s.t[i] <= kFlankHigh * peak)
    {
      fx.push_back(s.u[i]);
      fy.push_back(s.t[i]);
    }
  est.rising_points = rx.size();
  est.falling_points = fx.size();

  // The peak level stands in for a flank that is a plateau reaching the end
  // of the sweep (inputs clamped at the first or last knot).
  const bool left_plateau = first == 0;
  const bool right_plateau = last + 1 == s.t.size();
  const bool have_rise = rx.size() >= 2;
  const bool have_fall = fx.size() >= 2;

  const auto anomaly = [&](const char *why) {
    est.status = DeltaStatus::Anomaly;
    est.estimate = argmax_u;
    est.note = why;
    return est;
  };

  if (have_rise && have_fall)
  {
    const Line a = fit_line(rx, ry);
    const Line b = fit_line(fx, fy);
    if (!(a.slope > 0.0) || !(b.slope < 0.0))
      return anomaly("flank slopes have the wrong sign; using the argmax");
    est.estimate = (b.intercept - a.intercept) / (a.slope - b.slope);
  }
  else if (have_fall && left_plateau)
  {
    const Line b = fit_line(fx, fy);
    if (!(b.slope < 0.0))
      return anomaly("falling flank is not decreasing; using the argmax");
    est.estimate = (peak - b.intercept) / b.slope;
    est.note = "left plateau";
  }
  else if (have_rise && right_plateau)
  {
    const Line a = fit_line(rx, ry);
    if (!(a.slope > 0.0))
      return anomaly("rising flank is not increasing; using the argmax");
    est.estimate = (peak - a.intercept) / a.slope;
    est.note = "right plateau";
  }
  else
  {
    return anomaly("too few flank points; using the argmax");
  }
  if (!std::isfinite(est.estimate) || est.estimate <= 0.0)
    return anomaly("flank intersection is not positive; using the argmax");
  return est;
}

} // namespace

DeltaEstimateResult estimate_knots_delta(const std::vector<DeltaSweep> &sweeps)
{
  std::map<std::size_t, const DeltaSweep *> by_m;
  for (const auto &s : sweeps)
  {
    validate(s);
    if (!by_m.emplace(s.m, &s).second)
      throw FitError("duplicate sweep for knot " + std::to_string(s.m));
  }
  if (by_m.empty())
    throw FitError("insufficient data: no sweeps");
  const std::size_t n = by_m.rbegin()->first;
  if (n < kFirstActiveKnot + 1)
    throw FitError("insufficient data: need sweeps for at least two active knots");

  std::vector<DeltaKnotEstimate> per_knot;
  std::vector<double> active;
  for (std::size_t m = 1; m <= n; ++m)
  {
    const auto it = by_m.find(m);
    if (it == by_m.end())
    {
      if (m >= kFirstActiveKnot)
        throw FitError("missing sweep for knot " + std::to_string(m));
      continue;
    }
    DeltaKnotEstimate est = estimate_one(*it->second);
    if (m >= kFirstActiveKnot)
    {
      if (est.status == DeltaStatus::NoResponse)
        throw FitError("sweep for knot " + std::to_string(m) + " shows no response");
      active.push_back(est.estimate);
    }
    per_knot.push_back(std::move(est));
  }
  for (std::size_t i = 1; i < active.size(); ++i)
    if (!(active[i] > active[i - 1]))
      throw FitError("knot estimates are not increasing at index " + std::to_string(i + kFirstActiveKnot));
  return {KnotGrid(std::move(active)), std::move(per_knot)};
}

// ---------------------------------------------------------------------------
// Knot optimization

double median_abs(std::vector<double> values)
{
  if (values.empty())
    return 0.0;
  for (double &x : values)
    x = std::abs(x);
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0)
    m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

namespace
{

struct PreparedSample
{
  ColorTriplet u;
  ColorTriplet v;
  std::size_t dataset;
};

// Sorted copy of exp(theta) kept strictly increasing, plus the squared
// ordering violations in log units.
double knots_from_log(std::span<const double> theta, std::vector<double> &knots)
{
  double violation = 0.0;
  for (std::size_t i = 1; i < theta.size(); ++i)
  {
    const double d = theta[i - 1] - theta[i];
    if (d >= 0.0)
      violation += d * d + 1e-300;
  }
  knots.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    knots[i] = std::exp(theta[i]);
  if (violation > 0.0)
  {
    std::sort(knots.begin(), knots.end());
    for (std::size_t i = 1; i < knots.size(); ++i)
      knots[i] = std::max(knots[i], std::nextafter(knots[i - 1], std::numeric_limits<double>::infinity()));
  }
  return violation;
}

} // namespace

KnotOptimizeResult estimate_knots_optimize(const std::vector<TonemapDataset> &datasets, const KnotGrid &init,
                                           const KnotOptimizeOptions &options)
{
  if (datasets.empty())
    throw FitError("insufficient data: no datasets");
  if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0))
    throw InvalidArgument("holdout fraction must lie in [0, 1)");
  for (const auto &d : datasets)
    if (d.lut.size() != init.size())
      throw InvalidArgument("cube size " + std::to_string(d.lut.size()) + " does not match the knot grid size " +
                            std::to_string(init.size()));

  KnotOptimizeResult result{init, 0.0, 0.0, 0.0, 0.0, 0, 0, 0, 0, false, {}};
  std::vector<PreparedSample> train, holdout;
  std::uint64_t index = 0;
  for (std::size_t di = 0; di < datasets.size(); ++di)
  {
    for (const SceneSample &s : datasets[di].samples)
    {
      const std::uint64_t id = index++;
      const ColorTriplet &m = s.params.material;
      if (m.r < options.filter_threshold || m.g < options.filter_threshold || m.b < options.filter_threshold)
      {
        ++result.excluded_samples;
        continue;
      }
      PreparedSample p{unprocessed(s.params, options.scale), s.v, di};
      CounterRng rng(options.seed, id);
      (rng.uniform() < options.holdout_fraction ? holdout : train).push_back(p);
    }
  }
  result.train_samples = train.size();
  result.holdout_samples = holdout.size();
  if (train.size() < init.active_count())
    throw FitError("insufficient data: " + std::to_string(train.size()) + " training samples for " +
                   std::to_string(init.active_count()) + " knots");

  const auto sse_of = [&](const std::vector<PreparedSample> &set, std::span<const double> knots,
                          std::vector<double> *errors) {
    double sse = 0.0;
    for (const auto &p : set)
    {
      const ColorTriplet t = interpolate_cube(knots, datasets[p.dataset].lut, p.u);
      for (std::size_t k = 0; k < 3; ++k)
      {
        const double e = srgb_encode(t[k]) - p.v[k];
        sse += e * e;
        if (errors)
          errors->push_back(e);
      }
    }
    return sse;
  };

  std::vector<double> scratch;
  const optim::Objective objective = [&](std::span<const double> theta) {
    const double violation = knots_from_log(theta, scratch);
    return sse_of(train, scratch, nullptr) + options.penalty_weight * violation;
  };

  std::vector<double> start;
  for (double u : init.active())
    start.push_back(std::log(u));
  result.initial_train_sse = objective(start);

  optim::SimplexOptions so;
  so.max_evaluations = options.max_evaluations;
  so.restarts = options.restarts;
  so.initial_step = options.initial_step;
  const optim::SimplexResult best = optim::nelder_mead(objective, start, so);
  result.evaluations = best.evaluations;
  result.converged = best.converged;
  if (!best.converged)
    result.warnings.push_back("simplex search stopped at the evaluation cap; returning the best point found");

  std::vector<double> knots(best.point.size());
  for (std::size_t i = 0; i < knots.size(); ++i)
    knots[i] = std::exp(best.point[i]);
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw FitError("optimized knots are not increasing at index " + std::to_string(i + kFirstActiveKnot));
  result.knots = KnotGrid(knots);

  std::vector<double> errors;
  result.train_sse = sse_of(train, knots, &errors);
  result.train_median_abs_255 = 255.0 * median_abs(errors);
  errors.clear();
  sse_of(holdout, knots, &errors);
  result.holdout_median_abs_255 = 255.0 * median_abs(errors);
  return result;
}

} // namespace hdrp
