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


#include "hdrp/harness.hpp"

#include "hdrp/colorspace.hpp"
#include "hdrp/error.hpp"
#include "hdrp/random.hpp"
#include "hdrp/scene.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>

namespace hdrp
{

namespace
{

void check_interval(const Interval &iv, const char *what)
{
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo < 0.0 || iv.hi < iv.lo)
    throw InvalidArgument(std::string(what) + " range must satisfy 0 <= lo <= hi");
}

Vec3 random_unit(CounterRng &rng)
{
  for (;;)
  {
    const Vec3 g{rng.normal(), rng.normal(), rng.normal()};
    const double len = norm(g);
    if (len > 1e-6)
      return (1.0 / len) * g;
  }
}

} // namespace

void validate(const SampleRanges &ranges)
{
  check_interval(ranges.ambient_color, "ambient color");
  check_interval(ranges.directional_intensity, "directional intensity");
  check_interval(ranges.ambient_intensity, "ambient intensity");
  if (ranges.exposures.empty())
    throw InvalidArgument("exposure set must not be empty");
  for (double e : ranges.exposures)
    if (!std::isfinite(e))
      throw InvalidArgument("exposures must be finite");
  validate_unit(ranges.view, "view direction", kIngestUnitTolerance);
}

std::vector<SceneSample> generate_samples(const GenerateConfig &config, const Tonemap &tonemap)
{
  if (config.count == 0)
    throw InvalidArgument("sample count must be at least 1");
  if (!(config.scale > 0.0) || !std::isfinite(config.scale))
    throw InvalidArgument("scale constant c must be positive");
  const SampleRanges &rg = config.ranges;
  validate(rg);
  const Vec3 view = (1.0 / norm(rg.view)) * rg.view;

  std::vector<SceneSample> out;
  out.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i)
  {
    CounterRng rng(config.seed, i);
    SceneParams p;
    p.kind = config.kind;
    for (std::size_t k = 0; k < 3; ++k)
      p.material[k] = rng.uniform();
    const auto e_index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(rg.exposures.size()));
    p.exposure = rg.exposures[std::min(e_index, rg.exposures.size() - 1)];

    if (config.kind == MaterialKind::Lambertian)
    {
      for (std::size_t k = 0; k < 3; ++k)
        p.directional.color[k] = rng.uniform();
      for (std::size_t k = 0; k < 3; ++k)
        p.ambient.color[k] = rng.uniform(rg.ambient_color.lo, rg.ambient_color.hi);
      p.directional.intensity = rng.uniform(rg.directional_intensity.lo, rg.directional_intensity.hi);
      p.ambient.intensity = rng.uniform(rg.ambient_intensity.lo, rg.ambient_intensity.hi);
      p.directional.direction = random_unit(rng);
      Vec3 n = random_unit(rng);
      if (dot(n, view) < 0.0)
        n = -1.0 * n;
      p.normal = n;
    }
    else
    {
      p.normal = {0.0, 0.0, 0.0};
    }
    out.push_back({p, render(p, tonemap, config.quantize, config.scale)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sample CSV

const char *sample_csv_header()
{
  return "kind,m_r,m_g,m_b,n_x,n_y,n_z,d_r,d_g,d_b,i_d,l_x,l_y,l_z,a_r,a_g,a_b,i_a,e,v_r,v_g,v_b";
}

namespace
{

constexpr std::size_t kSampleFields = 22;

const char *kind_name(MaterialKind k) { return k == MaterialKind::Unlit ? "unlit" : "lambertian"; }

// Empty when the row is acceptable; otherwise the first violated invariant.
std::string check_row(SceneParams &p, const ColorTriplet &v)
{
  const auto unit_box = [](const ColorTriplet &c) { return in_unit_cube(c); };
  if (!unit_box(p.material))
    return "material color outside [0, 1]";
  if (!unit_box(v))
    return "recorded value v outside [0, 1]";
  if (p.kind == MaterialKind::Unlit)
    return {};
  if (!unit_box(p.directional.color))
    return "directional light color outside [0, 1]";
  for (std::size_t k = 0; k < 3; ++k)
    if (p.ambient.color[k] < 0.0)
      return "ambient light color is negative";
  if (p.directional.intensity < 0.0 || p.ambient.intensity < 0.0)
    return "light intensity is negative";
  const double nn = norm(p.normal);
  if (std::abs(nn - 1.0) > kIngestUnitTolerance)
    return "surface normal is not a unit vector (|n| = " + detail::format_double(nn, 9) + ")";
  const double ln = norm(p.directional.direction);
  if (std::abs(ln - 1.0) > kIngestUnitTolerance)
    return "light direction is not a unit vector (|l| = " + detail::format_double(ln, 9) + ")";
  p.normal = (1.0 / nn) * p.normal;
  p.directional.direction = (1.0 / ln) * p.directional.direction;
  return {};
}

} // namespace

LoadedSamples load_samples(std::istream &in)
{
  const auto lines = detail::read_content_lines(in);
  if (lines.empty())
    throw FormatError("missing sample CSV header", 1);
  const auto header = detail::split_csv(lines[0].text);
  const auto expected = detail::split_csv(sample_csv_header());
  bool match = header.size() == expected.size();
  for (std::size_t i = 0; match && i < header.size(); ++i)
    match = header[i].text == expected[i].text;
  if (!match)
    throw FormatError(std::string("header does not match the sample schema `") + sample_csv_header() + "`",
                      lines[0].number);

  LoadedSamples out;
  for (std::size_t li = 1; li < lines.size(); ++li)
  {
    const auto &ln = lines[li];
    const auto f = detail::split_csv(ln.text);
    if (f.size() != kSampleFields)
      throw FormatError("expected " + std::to_string(kSampleFields) + " fields, found " + std::to_string(f.size()),
                        ln.number);
    SceneParams p;
    if (f[0].text == "lambertian")
      p.kind = MaterialKind::Lambertian;
    else if (f[0].text == "unlit")
      p.kind = MaterialKind::Unlit;
    else
      throw FormatError("kind must be `lambertian` or `unlit`, found '" + std::string(f[0].text) + "'", ln.number,
                        f[0].column);
    std::array<double, kSampleFields> x{};
    for (std::size_t i = 1; i < kSampleFields; ++i)
      x[i] = detail::parse_double(f[i], ln.number);
    p.material = {x[1], x[2], x[3]};
    p.normal = {x[4], x[5], x[6]};
    p.directional.color = {x[7], x[8], x[9]};
    p.directional.intensity = x[10];
    p.directional.direction = {x[11], x[12], x[13]};
    p.ambient.color = {x[14], x[15], x[16]};
    p.ambient.intensity = x[17];
    p.exposure = x[18];
    const ColorTriplet v{x[19], x[20], x[21]};
    std::string why = check_row(p, v);
    if (!why.empty())
    {
      out.rejected.push_back({ln.number, std::move(why)});
      continue;
    }
    out.samples.push_back({p, v});
  }
  return out;
}

void save_samples(std::ostream &out, const std::vector<SceneSample> &samples)
{
  out << sample_csv_header() << '\n';
  for (const SceneSample &s : samples)
  {
    const SceneParams &p = s.params;
    const std::array<double, kSampleFields - 1> x{
      p.material.r,         p.material.g,          p.material.b,          p.normal.x,
      p.normal.y,           p.normal.z,            p.directional.color.r, p.directional.color.g,
      p.directional.color.b, p.directional.intensity, p.directional.direction.x, p.directional.direction.y,
      p.directional.direction.z, p.ambient.color.r, p.ambient.color.g, p.ambient.color.b,
      p.ambient.intensity,  p.exposure,            s.v.r,                 s.v.g,
      s.v.b};
    out << kind_name(p.kind);
    for (double d : x)
      out << ',' << detail::format_double(d);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Model validation

ValidationReport validate_model(const std::vector<SceneSample> &samples, const ValidationConfig &config)
{
  if (samples.empty())
    throw InvalidArgument("validate_model needs at least one sample");
  ValidationReport report;
  report.filter_threshold = config.filter_threshold;
  std::vector<double> pooled, filtered;
  std::array<std::vector<double>, kMaterialBins> bin_errors;
  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    const SceneSample &s = samples[i];
    SampleError row{i, s.params.kind, s.params.material, {}, s.v, {}};
    row.predicted = render(s.params, config.tonemap, config.quantize, config.scale);
    const ColorTriplet &m = s.params.material;
    const bool keep = m.r >= config.filter_threshold && m.g >= config.filter_threshold && m.b >= config.filter_threshold;
    if (!keep)
      ++report.excluded;
    for (std::size_t k = 0; k < 3; ++k)
    {
      const double e = row.predicted[k] - row.actual[k];
      row.error[k] = e;
      pooled.push_back(e);
      if (keep)
        filtered.push_back(e);
      report.max_abs_255 = std::max(report.max_abs_255, 255.0 * std::abs(e));
      const auto b = std::min(static_cast<std::size_t>(m[k] * kMaterialBins), kMaterialBins - 1);
      bin_errors[b].push_back(e);
    }
    report.rows.push_back(row);
  }
  report.median_abs_255 = 255.0 * median_abs(pooled);
  report.filtered_median_abs_255 = 255.0 * median_abs(filtered);
  for (std::size_t b = 0; b < kMaterialBins; ++b)
  {
    MaterialBin bin;
    bin.lo = static_cast<double>(b) / kMaterialBins;
    bin.hi = static_cast<double>(b + 1) / kMaterialBins;
    bin.count = bin_errors[b].size();
    if (bin.count)
    {
      double sum = 0.0;
      for (double e : bin_errors[b])
        sum += e;
      bin.mean_error_255 = 255.0 * sum / static_cast<double>(bin.count);
      bin.median_abs_255 = 255.0 * median_abs(bin_errors[b]);
    }
    report.bins.push_back(bin);
  }
  return report;
}

void write_report_csv(std::ostream &out, const ValidationReport &report)
{
  out << "index,kind,m_r,m_g,m_b,pred_r,pred_g,pred_b,actual_r,actual_g,actual_b,err_r,err_g,err_b\n";
  for (const SampleError &r : report.rows)
  {
    out << r.index << ',' << kind_name(r.kind);
    for (const ColorTriplet *c : {&r.material, &r.predicted, &r.actual, &r.error})
      for (std::size_t k = 0; k < 3; ++k)
        out << ',' << detail::format_double((*c)[k]);
    out << '\n';
  }
  out << "# median_abs_255," << detail::format_double(report.median_abs_255, 9) << '\n';
  out << "# filtered_median_abs_255," << detail::format_double(report.filtered_median_abs_255, 9) << '\n';
  out << "# filter_threshold," << detail::format_double(report.filter_threshold, 9) << '\n';
  out << "# excluded_samples," << report.excluded << '\n';
  out << "# max_abs_255," << detail::format_double(report.max_abs_255, 9) << '\n';
  out << "# bin_lo,bin_hi,count,median_abs_255,mean_error_255\n";
  for (const MaterialBin &b : report.bins)
    out << "# " << detail::format_double(b.lo, 3) << ',' << detail::format_double(b.hi, 3) << ',' << b.count << ','
        << detail::format_double(b.median_abs_255, 9) << ',' << detail::format_double(b.mean_error_255, 9) << '\n';
}

namespace
{

struct Panel
{
  double x0, y0, w, h;       // pixels
  double xmin, xmax, ymin, ymax; // data
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (std::clamp(y, ymin, ymax) - ymin) / (ymax - ymin) * h; }
};

void svg_axes(std::ostream &out, const Panel &p, const std::string &title, const std::string &xlabel,
              const std::string &ylabel)
{
  out << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w << "\" height=\"" << p.h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 - 8 << "\" text-anchor=\"middle\">" << title
      << "</text>\n";
  out << "<text x=\"" << p.x0 + p.w / 2 << "\" y=\"" << p.y0 + p.h + 34 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text transform=\"translate(" << p.x0 - 38 << ',' << p.y0 + p.h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (int i = 0; i <= 4; ++i)
  {
    const double xv = p.xmin + (p.xmax - p.xmin) * i / 4.0;
    const double yv = p.ymin + (p.ymax - p.ymin) * i / 4.0;
    out << "<text x=\"" << p.px(xv) << "\" y=\"" << p.y0 + p.h + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << detail::format_double(xv, 3) << "</text>\n";
    out << "<text x=\"" << p.x0 - 6 << "\" y=\"" << p.py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << detail::format_double(yv, 3) << "</text>\n";
  }
}

void svg_line(std::ostream &out, const Panel &p, double xa, double ya, double xb, double yb, const char *style)
{
  out << "<line x1=\"" << p.px(xa) << "\" y1=\"" << p.py(ya) << "\" x2=\"" << p.px(xb) << "\" y2=\"" << p.py(yb)
      << "\" " << style << "/>\n";
}

} // namespace

void write_report_svg(std::ostream &out, const ValidationReport &report)
{
  static const char *colors[3] = {"#d62728", "#2ca02c", "#1f77b4"};
  const double err_range = std::max(3.0, std::ceil(report.max_abs_255 * 1.1));
  const Panel a{60, 40, 320, 320, 0.0, 1.0, 0.0, 1.0};
  const Panel b{480, 40, 320, 320, 0.0, 1.0, -err_range, err_range};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"440\" font-family=\"sans-serif\" "
         "font-size=\"13\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg_axes(out, a, "Predicted vs actual", "actual v", "predicted v");
  svg_axes(out, b, "Prediction error", "actual v", "error (x 1/255)");
  svg_line(out, a, 0, 0, 1, 1, "stroke=\"black\" stroke-width=\"0.8\"");
  svg_line(out, b, 0, 0, 1, 0, "stroke=\"black\" stroke-width=\"0.8\"");
  svg_line(out, b, 0, 1, 1, 1, "stroke=\"gray\" stroke-dasharray=\"4 3\"");
  svg_line(out, b, 0, -1, 1, -1, "stroke=\"gray\" stroke-dasharray=\"4 3\"");
  for (const SampleError &r : report.rows)
    for (std::size_t k = 0; k < 3; ++k)
    {
      out << "<circle cx=\"" << detail::format_double(a.px(r.actual[k]), 6) << "\" cy=\""
          << detail::format_double(a.py(r.predicted[k]), 6) << "\" r=\"1.2\" fill=\"" << colors[k]
          << "\" fill-opacity=\"0.5\"/>\n";
      out << "<circle cx=\"" << detail::format_double(b.px(r.actual[k]), 6) << "\" cy=\""
          << detail::format_double(b.py(255.0 * r.error[k]), 6) << "\" r=\"1.2\" fill=\"" << colors[k]
          << "\" fill-opacity=\"0.5\"/>\n";
    }
  out << "<text x=\"480\" y=\"420\">median |error| = " << detail::format_double(report.median_abs_255, 3)
      << "/255; without m_k &lt; " << detail::format_double(report.filter_threshold, 3) << ": "
      << detail::format_double(report.filtered_median_abs_255, 3) << "/255</text>\n";
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Delta sweeps

std::vector<DeltaSweep> synthesize_delta_sweeps(const KnotGrid &knots, const SweepConfig &config)
{
  if (!(config.lo > 0.0) || !(config.hi > config.lo) || config.points < 2)
    throw InvalidArgument("sweep needs 0 < lo < hi and at least 2 points");
  std::vector<double> u(config.points);
  const double a = std::log(config.lo), b = std::log(config.hi);
  for (std::size_t i = 0; i < config.points; ++i)
    u[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(config.points - 1));

  std::vector<DeltaSweep> out;
  for (std::size_t m = 1; m <= knots.size(); ++m)
  {
    const CubeLUT lut = make_delta_cube(m, knots.size());
    DeltaSweep s{m, u, {}};
    s.t.reserve(u.size());
    for (double x : u)
      s.t.push_back(interpolate_cube(knots.active(), lut, {x, x, x}).r);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Display characterization

std::vector<CharacterizationReading> simulate_characterization(const DisplayModel &display, const Tonemap &tonemap,
                                                               const std::vector<ColorTriplet> &stimuli)
{
  std::vector<CharacterizationReading> out;
  out.reserve(stimuli.size());
  for (const ColorTriplet &u : stimuli)
  {
    CharacterizationReading r;
    r.u = u;
    r.v = post_process(u, tonemap);
    if (const auto *a = std::get_if<AchromaticDisplay>(&display))
    {
      if (!(u.r == u.g && u.g == u.b))
        throw InvalidArgument("achromatic displays need gray stimuli");
      r.luminance = achromatic_luminance(*a, r.v.r);
    }
    else
    {
      r.xyz = chromatic_xyz(std::get<ChromaticDisplay>(display), r.v);
      r.luminance = r.xyz.y;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<ColorTriplet> gray_ramp(const std::vector<double> &levels)
{
  std::vector<ColorTriplet> out;
  for (double x : levels)
    out.push_back(ColorTriplet::uniform(x));
  return out;
}

std::vector<ColorTriplet> channel_ramp(std::size_t channel, const std::vector<double> &levels)
{
  if (channel > 2)
    throw InvalidArgument("channel index out of range");
  std::vector<ColorTriplet> out;
  for (double x : levels)
  {
    ColorTriplet c{0.0, 0.0, 0.0};
    c[channel] = x;
    out.push_back(c);
  }
  return out;
}

std::vector<double> linear_levels(double lo, double hi, std::size_t count)
{
  if (count < 2 || !(hi >= lo))
    throw InvalidArgument("linear_levels needs lo <= hi and at least 2 points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

LinearityReport linearity_against(const std::vector<double> &x, const std::vector<double> &y, double slope,
                                  double threshold)
{
  if (x.size() != y.size())
    throw InvalidArgument("linearity: x and y sizes differ");
  LinearityReport rep;
  rep.slope = slope;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    if (x[i] < threshold)
      continue;
    ++rep.points;
    const double fit = slope * x[i];
    const double rel = std::abs(y[i] - fit) / std::abs(fit);
    if (rel > rep.max_relative_error || rep.points == 1)
    {
      rep.max_relative_error = std::max(rep.max_relative_error, rel);
      rep.worst_x = x[i];
    }
  }
  if (rep.points == 0)
    throw InvalidArgument("linearity: no points at or above the threshold");
  return rep;
}

LinearityReport linearity_through_origin(const std::vector<double> &x, const std::vector<double> &y,
                                         double threshold)
{
  if (x.size() != y.size())
    throw InvalidArgument("linearity: x and y sizes differ");
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= threshold)
    {
      sxy += x[i] * y[i];
      sxx += x[i] * x[i];
    }
  if (!(sxx > 0.0))
    throw InvalidArgument("linearity: no nonzero points at or above the threshold");
  return linearity_against(x, y, sxy / sxx, threshold);
}

void write_characterization_csv(std::ostream &out, const std::vector<CharacterizationReading> &readings)
{
  out << "u_r,u_g,u_b,v_r,v_g,v_b,X,Y,Z,L\n";
  for (const auto &r : readings)
  {
    for (double d : {r.u.r, r.u.g, r.u.b, r.v.r, r.v.g, r.v.b, r.xyz.x, r.xyz.y, r.xyz.z})
      out << detail::format_double(d) << ',';
    out << detail::format_double(r.luminance) << '\n';
  }
}

} // namespace hdrp
