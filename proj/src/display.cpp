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

#include "hdrp/display.hpp"

#include "hdrp/error.hpp"
#include "hdrp/optim.hpp"
#include "text_util.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hdrp
{

double GammaActivation::apply(double x) const
{
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("activation input " + std::to_string(x) + " outside [0, 1]");
  return std::pow(x, gamma);
}

double GammaActivation::inverse(double y) const
{
  if (!(y >= 0.0 && y <= 1.0))
    throw DomainError("inverse activation input " + std::to_string(y) + " outside [0, 1]");
  return std::pow(y, 1.0 / gamma);
}

void validate(const AchromaticDisplay &display)
{
  if (!(display.L0 >= 0.0) || !std::isfinite(display.L0))
    throw ValidationError("L0 must be finite and nonnegative");
  if (!(display.L1 > 0.0) || !std::isfinite(display.L1))
    throw ValidationError("L1 must be finite and positive");
  if (!(display.activation.gamma > 0.0) || !std::isfinite(display.activation.gamma))
    throw ValidationError("gamma must be finite and positive");
}

void validate(const ChromaticDisplay &display)
{
  for (std::size_t k = 0; k < 3; ++k)
  {
    const Vec3 &p = display.primaries[k];
    for (std::size_t c = 0; c < 3; ++c)
      if (!(p[c] >= 0.0) || !std::isfinite(p[c]))
        throw ValidationError(std::string(channel_name(k)) + " primary must be finite and nonnegative");
    if (!(p.y > 0.0))
      throw ValidationError(std::string(channel_name(k)) + " primary needs a positive Y component");
    if (!(display.activations[k].gamma > 0.0) || !std::isfinite(display.activations[k].gamma))
      throw ValidationError(std::string(channel_name(k)) + " gamma must be finite and positive");
  }
  for (std::size_t c = 0; c < 3; ++c)
    if (!std::isfinite(display.background[c]))
      throw ValidationError("background must be finite");
}

double achromatic_luminance(const AchromaticDisplay &display, double v)
{
  validate(display);
  return display.L1 * display.activation.apply(v) + display.L0;
}

Vec3 chromatic_xyz(const ChromaticDisplay &display, const ColorTriplet &v)
{
  if (!in_unit_cube(v))
    throw DomainError("chromatic_xyz: v outside [0,1]^3");
  Vec3 x = display.background;
  for (std::size_t k = 0; k < 3; ++k)
    x = x + display.activations[k].apply(v[k]) * display.primaries[k];
  return x;
}

namespace
{

Eigen::Matrix3d primary_matrix(const std::array<Vec3, 3> &primaries)
{
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k)
    m.col(k) << primaries[k].x, primaries[k].y, primaries[k].z;
  return m;
}

// Rank threshold on the singular value ratio.
constexpr double kSingularRatio = 1e-12;

} // namespace

BackgroundWeights solve_background_weights(const std::array<Vec3, 3> &primaries, const Vec3 &background,
                                           bool allow_least_squares)
{
  const Eigen::Matrix3d m = primary_matrix(primaries);
  const Eigen::Vector3d z(background.x, background.y, background.z);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double ratio = sv(0) > 0.0 ? sv(2) / sv(0) : 0.0;
  const double condition = ratio > 0.0 ? 1.0 / ratio : std::numeric_limits<double>::infinity();

  Eigen::Vector3d w;
  if (ratio <= kSingularRatio)
  {
    if (!allow_least_squares)
      throw SingularMatrixError("primary matrix is singular (condition number " + std::to_string(condition) + ")",
                                condition);
    w = m.completeOrthogonalDecomposition().solve(z);
  }
  else
  {
    w = m.colPivHouseholderQr().solve(z);
  }

  BackgroundWeights out;
  out.weights = {w(0), w(1), w(2)};
  out.residual = (m * w - z).norm();
  out.condition = condition;
  return out;
}

std::array<double, 3> primary_coefficients(const ChromaticDisplay &display, const Vec3 &xyz)
{
  const Eigen::Matrix3d m = primary_matrix(display.primaries);
  const Eigen::Vector3d c = m.colPivHouseholderQr().solve(Eigen::Vector3d(xyz.x, xyz.y, xyz.z));
  return {c(0), c(1), c(2)};
}

// ---------------------------------------------------------------------------
// Fitting

AchromaticDisplay fit_achromatic(const std::vector<LuminanceMeasurement> &measurements)
{
  if (measurements.size() < 5)
    throw FitError("insufficient data: need at least 5 luminance readings, got " + std::to_string(measurements.size()));

  std::map<double, std::pair<double, std::size_t>> grouped;
  for (const auto &m : measurements)
  {
    if (!(m.v >= 0.0 && m.v <= 1.0))
      throw FitError("measurement v = " + std::to_string(m.v) + " outside [0, 1]");
    if (!(m.luminance >= 0.0) || !std::isfinite(m.luminance))
      throw FitError("luminance readings must be finite and nonnegative");
    auto &g = grouped[m.v];
    g.first += m.luminance;
    ++g.second;
  }
  std::vector<double> v, L;
  for (const auto &[level, acc] : grouped)
  {
    v.push_back(level);
    L.push_back(acc.first / static_cast<double>(acc.second));
  }
  if (v.size() < 3)
    throw FitError("insufficient data: need at least 3 distinct v levels");
  if (v.front() > 0.1 || v.back() < 0.9)
    throw FitError("insufficient data: readings must include v <= 0.1 and v >= 0.9");

  const auto [lo, hi] = std::minmax_element(L.begin(), L.end());
  if (*hi - *lo <= 1e-12 * (1.0 + *hi))
    throw FitError("degenerate data: luminance readings are constant");

  const std::size_t count = v.size();
  const optim::LmModel model = [&](std::span<const double> p, std::span<double> r, std::span<double> J) {
    for (std::size_t i = 0; i < count; ++i)
    {
      const double h = v[i] > 0.0 ? std::pow(v[i], p[2]) : 0.0;
      r[i] = p[0] + p[1] * h - L[i];
      J[3 * i + 0] = 1.0;
      J[3 * i + 1] = h;
      J[3 * i + 2] = v[i] > 0.0 ? p[1] * h * std::log(v[i]) : 0.0;
    }
  };
  const optim::Feasible feasible = [](std::span<const double> p) { return p[1] > 0.0 && p[2] > 0.0; };

  optim::LmOptions options;
  options.max_iterations = kFitIterationCap;
  options.step_tolerance = kFitStepTolerance;
  const auto result = optim::levenberg_marquardt(model, {*lo, *hi - *lo, 2.2}, count, options, feasible);
  if (!result.converged)
    throw ConvergenceError("achromatic fit did not converge in " + std::to_string(kFitIterationCap) +
                           " iterations; last iterate L0=" + std::to_string(result.params[0]) +
                           " L1=" + std::to_string(result.params[1]) + " gamma=" + std::to_string(result.params[2]));

  AchromaticDisplay display;
  display.L0 = result.params[0];
  display.L1 = result.params[1];
  display.activation.gamma = result.params[2];

  FitReport report;
  report.point_count = count;
  report.iterations = result.iterations;
  double ss = 0.0;
  for (std::size_t i = 0; i < count; ++i)
  {
    const double h = v[i] > 0.0 ? std::pow(v[i], display.activation.gamma) : 0.0;
    const double res = display.L0 + display.L1 * h - L[i];
    report.residuals.push_back(res);
    ss += res * res;
  }
  report.residual_rms = std::sqrt(ss / static_cast<double>(count));
  display.fit = std::move(report);
  return display;
}

namespace
{

bool is_channel_only(const ColorTriplet &v, std::size_t k, double level)
{
  for (std::size_t c = 0; c < 3; ++c)
    if (v[c] != (c == k ? level : 0.0))
      return false;
  return true;
}

} // namespace

ChromaticDisplay fit_chromatic(const std::vector<XyzMeasurement> &measurements)
{
  // Average repeated stimuli.
  std::map<std::array<double, 3>, std::pair<Vec3, std::size_t>> grouped;
  for (const auto &m : measurements)
  {
    if (!in_unit_cube(m.v))
      throw FitError("measurement v outside [0,1]^3");
    for (std::size_t c = 0; c < 3; ++c)
      if (!(m.xyz[c] >= 0.0) || !std::isfinite(m.xyz[c]))
        throw FitError("XYZ readings must be finite and nonnegative");
    auto &g = grouped[{m.v.r, m.v.g, m.v.b}];
    g.first = g.first + m.xyz;
    ++g.second;
  }
  std::vector<XyzMeasurement> rows;
  for (const auto &[key, acc] : grouped)
    rows.push_back({{key[0], key[1], key[2]}, (1.0 / static_cast<double>(acc.second)) * acc.first});

  const auto find = [&](std::size_t k, double level) -> const XyzMeasurement * {
    for (const auto &r : rows)
      if (is_channel_only(r.v, k, level))
        return &r;
    return nullptr;
  };

  const XyzMeasurement *black = find(0, 0.0);
  if (!black)
    throw FitError("insufficient data: missing the v = (0,0,0) background reading");

  ChromaticDisplay display;
  display.background = black->xyz;
  for (std::size_t k = 0; k < 3; ++k)
  {
    const XyzMeasurement *full = find(k, 1.0);
    if (!full)
      throw FitError(std::string("insufficient data: missing the full-drive ") + channel_name(k) + " reading");
    display.primaries[k] = full->xyz - display.background;
    if (!(display.primaries[k].y > 0.0))
      throw FitError(std::string(channel_name(k)) + " primary has no positive luminance above the background");
    for (std::size_t c = 0; c < 3; ++c)
      display.primaries[k][c] = std::max(display.primaries[k][c], 0.0);
  }

  const BackgroundWeights bw = solve_background_weights(display.primaries, display.background);
  display.weights = bw.weights;
  display.weights_residual = bw.residual;
  display.condition_number = bw.condition;

  // Channel activations from every reading with an interior level.
  std::array<std::vector<std::pair<double, double>>, 3> points;
  for (const auto &r : rows)
  {
    const auto p = primary_coefficients(display, r.xyz - display.background);
    for (std::size_t k = 0; k < 3; ++k)
      if (r.v[k] > 0.0 && r.v[k] < 1.0)
        points[k].emplace_back(r.v[k], p[k]);
  }

  FitReport report;
  double ss = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
  {
    const auto &pts = points[k];
    if (pts.empty())
      throw FitError(std::string("insufficient data: no interior levels on the ") + channel_name(k) + " ramp");

    const optim::LmModel model = [&](std::span<const double> p, std::span<double> r, std::span<double> J) {
      for (std::size_t i = 0; i < pts.size(); ++i)
      {
        const double h = std::pow(pts[i].first, p[0]);
        r[i] = h - pts[i].second;
        J[i] = h * std::log(pts[i].first);
      }
    };
    optim::LmOptions options;
    options.max_iterations = kFitIterationCap;
    options.step_tolerance = kFitStepTolerance;
    const auto result = optim::levenberg_marquardt(model, {2.2}, pts.size(), options,
                                                   [](std::span<const double> p) { return p[0] > 0.0; });
    if (!result.converged)
      throw ConvergenceError(std::string(channel_name(k)) + " gamma fit did not converge; last gamma " +
                             std::to_string(result.params[0]));
    display.activations[k].gamma = result.params[0];
    report.iterations += result.iterations;
    for (const auto &[level, activation] : pts)
    {
      const double res = std::pow(level, result.params[0]) - activation;
      report.residuals.push_back(res);
      ss += res * res;
    }
  }
  report.point_count = report.residuals.size();
  report.residual_rms = std::sqrt(ss / static_cast<double>(report.point_count));
  display.fit = std::move(report);
  return display;
}

// ---------------------------------------------------------------------------
// CSV

namespace
{

std::vector<std::vector<double>> read_numeric_csv(std::istream &in, const std::vector<std::string_view> &header)
{
  const auto lines = detail::read_content_lines(in);
  std::string expected;
  for (std::size_t i = 0; i < header.size(); ++i)
    expected += (i ? "," : "") + std::string(header[i]);
  if (lines.empty())
    throw FormatError("empty CSV; expected header '" + expected + "'");
  const auto h = detail::split_csv(lines.front().text);
  bool ok = h.size() == header.size();
  for (std::size_t i = 0; ok && i < h.size(); ++i)
    ok = h[i].text == header[i];
  if (!ok)
    throw FormatError("CSV header must be '" + expected + "'", lines.front().number);

  std::vector<std::vector<double>> rows;
  for (std::size_t r = 1; r < lines.size(); ++r)
  {
    const auto f = detail::split_csv(lines[r].text);
    if (f.size() != header.size())
      throw FormatError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()),
                        lines[r].number);
    std::vector<double> row;
    for (const auto &tok : f)
      row.push_back(detail::parse_double(tok, lines[r].number));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace

std::vector<LuminanceMeasurement> read_luminance_csv(std::istream &in)
{
  std::vector<LuminanceMeasurement> out;
  for (const auto &row : read_numeric_csv(in, {"v", "L"}))
    out.push_back({row[0], row[1]});
  return out;
}

std::vector<XyzMeasurement> read_xyz_csv(std::istream &in)
{
  std::vector<XyzMeasurement> out;
  for (const auto &row : read_numeric_csv(in, {"v_r", "v_g", "v_b", "X", "Y", "Z"}))
    out.push_back({{row[0], row[1], row[2]}, {row[3], row[4], row[5]}});
  return out;
}

void write_luminance_csv(std::ostream &out, const std::vector<LuminanceMeasurement> &rows)
{
  out << "v,L\n";
  for (const auto &r : rows)
    out << detail::format_double(r.v) << ',' << detail::format_double(r.luminance) << '\n';
}

void write_xyz_csv(std::ostream &out, const std::vector<XyzMeasurement> &rows)
{
  out << "v_r,v_g,v_b,X,Y,Z\n";
  for (const auto &r : rows)
  {
    out << detail::format_double(r.v.r) << ',' << detail::format_double(r.v.g) << ',' << detail::format_double(r.v.b);
    for (std::size_t c = 0; c < 3; ++c)
      out << ',' << detail::format_double(r.xyz[c]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace
{

using nlohmann::json;

json vec_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json &j, const char *what)
{
  if (!j.is_array() || j.size() != 3)
    throw FormatError(std::string(what) + " must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json fit_json(const std::optional<FitReport> &fit)
{
  if (!fit)
    return nullptr;
  return {{"residual_rms", fit->residual_rms}, {"point_count", fit->point_count}, {"iterations", fit->iterations}};
}

std::optional<FitReport> fit_from(const json &j)
{
  if (!j.contains("fit") || j["fit"].is_null())
    return std::nullopt;
  FitReport r;
  r.residual_rms = j["fit"].value("residual_rms", 0.0);
  r.point_count = j["fit"].value("point_count", std::size_t{0});
  r.iterations = j["fit"].value("iterations", std::size_t{0});
  return r;
}

} // namespace

std::string display_to_json(const DisplayModel &display)
{
  json j;
  if (const auto *a = std::get_if<AchromaticDisplay>(&display))
  {
    j = {{"kind", "achromatic"}, {"L0", a->L0}, {"L1", a->L1}, {"gamma", a->activation.gamma}, {"w", a->w()},
         {"fit", fit_json(a->fit)}};
  }
  else
  {
    const auto &c = std::get<ChromaticDisplay>(display);
    j = {{"kind", "chromatic"},
         {"primaries", {{"r", vec_json(c.primaries[0])}, {"g", vec_json(c.primaries[1])}, {"b", vec_json(c.primaries[2])}}},
         {"background", vec_json(c.background)},
         {"gamma", {c.activations[0].gamma, c.activations[1].gamma, c.activations[2].gamma}},
         {"weights", {c.weights[0], c.weights[1], c.weights[2]}},
         {"weights_residual", c.weights_residual},
         {"condition_number", c.condition_number},
         {"fit", fit_json(c.fit)}};
  }
  return j.dump(2) + "\n";
}

DisplayModel display_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw FormatError(std::string("display JSON: ") + e.what());
  }

  try
  {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "achromatic")
    {
      AchromaticDisplay a;
      a.L0 = j.at("L0").get<double>();
      a.L1 = j.at("L1").get<double>();
      a.activation.gamma = j.at("gamma").get<double>();
      a.fit = fit_from(j);
      validate(a);
      return a;
    }
    if (kind == "chromatic")
    {
      ChromaticDisplay c;
      const auto &p = j.at("primaries");
      c.primaries = {vec_from(p.at("r"), "primaries.r"), vec_from(p.at("g"), "primaries.g"),
                     vec_from(p.at("b"), "primaries.b")};
      c.background = vec_from(j.at("background"), "background");
      const auto &g = j.at("gamma");
      if (!g.is_array() || g.size() != 3)
        throw FormatError("gamma must be an array of three numbers");
      for (std::size_t k = 0; k < 3; ++k)
        c.activations[k].gamma = g[k].get<double>();
      validate(c);
      // Weights are derived; recompute rather than trust the document.
      const auto bw = solve_background_weights(c.primaries, c.background, true);
      c.weights = bw.weights;
      c.weights_residual = bw.residual;
      c.condition_number = bw.condition;
      c.fit = fit_from(j);
      return c;
    }
    throw FormatError("display JSON: unknown kind '" + kind + "'");
  }
  catch (const json::exception &e)
  {
    throw FormatError(std::string("display JSON: ") + e.what());
  }
}

} // namespace hdrp
