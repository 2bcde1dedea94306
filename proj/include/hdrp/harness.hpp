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


#ifndef HDRP_HARNESS_HPP
#define HDRP_HARNESS_HPP

#include "hdrp/calibration.hpp"
#include "hdrp/cube_lut.hpp"
#include "hdrp/display.hpp"
#include "hdrp/sample.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdrp
{

// ---------------------------------------------------------------------------
// Synthetic scenes

struct Interval
{
  double lo = 0.0;
  double hi = 1.0;
};

struct SampleRanges
{
  Interval ambient_color{0.0, 1.0}; // each component of a
  Interval directional_intensity{0.0, 2.0};
  Interval ambient_intensity{0.0, 2.0};
  std::vector<double> exposures{0.0}; // e drawn uniformly from this set
  Vec3 view{0.0, 0.0, -1.0};          // unit vector toward the camera; normals face it
};

void validate(const SampleRanges &ranges);

struct GenerateConfig
{
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  MaterialKind kind = MaterialKind::Lambertian;
  bool quantize = false;
  double scale = kDefaultScaleConstant;
  SampleRanges ranges;
};

/// Draws random materials and lighting and renders v through `tonemap`.
/// Sample i depends only on (seed, i). Unlit samples carry zero lighting
/// fields.
std::vector<SceneSample> generate_samples(const GenerateConfig &config, const Tonemap &tonemap);

// ---------------------------------------------------------------------------
// Sample CSV

inline constexpr double kIngestUnitTolerance = 1e-6;

struct RejectedRow
{
  std::size_t line = 0;
  std::string reason;
};

struct LoadedSamples
{
  std::vector<SceneSample> samples;
  std::vector<RejectedRow> rejected;
};

/// Parses the sample CSV. Header or numeric problems throw FormatError; rows
/// that parse but break an invariant are collected in `rejected`. Accepted
/// unit vectors are renormalized. Lighting fields of unlit rows are ignored.
LoadedSamples load_samples(std::istream &in);
void save_samples(std::ostream &out, const std::vector<SceneSample> &samples);

const char *sample_csv_header();

// ---------------------------------------------------------------------------
// Model validation

struct ValidationConfig
{
  double scale = kDefaultScaleConstant;
  Tonemap tonemap = Tonemap::identity();
  bool quantize = false;         // quantize predictions as the renderer would
  double filter_threshold = 0.2; // filtered median drops samples with any m_k below this
};

struct SampleError
{
  std::size_t index = 0;
  MaterialKind kind = MaterialKind::Lambertian;
  ColorTriplet material;
  ColorTriplet predicted;
  ColorTriplet actual;
  ColorTriplet error; // predicted - actual
};

/// Channel errors grouped by the material coordinate of the same channel.
struct MaterialBin
{
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double median_abs_255 = 0.0;
  double mean_error_255 = 0.0;
};

struct ValidationReport
{
  std::vector<SampleError> rows;
  double median_abs_255 = 0.0;          // pooled over channels
  double filtered_median_abs_255 = 0.0; // pooled, without filtered samples
  double max_abs_255 = 0.0;
  std::size_t excluded = 0;
  double filter_threshold = 0.2;
  std::vector<MaterialBin> bins;
};

inline constexpr std::size_t kMaterialBins = 10;

ValidationReport validate_model(const std::vector<SceneSample> &samples, const ValidationConfig &config);

/// Per-sample rows followed by '#'-prefixed summary lines.
void write_report_csv(std::ostream &out, const ValidationReport &report);
/// Predicted vs actual v and error vs actual v, with +-1/255 guides.
void write_report_svg(std::ostream &out, const ValidationReport &report);

// ---------------------------------------------------------------------------
// Delta sweeps

struct SweepConfig
{
  double lo = 1e-5;
  double hi = 100.0;
  std::size_t points = 2000; // log-spaced
};

/// Runs a scalar sweep u = (x, x, x) through delta cube m over `knots` for
/// every m in 1..knots.size(), reporting the red output.
std::vector<DeltaSweep> synthesize_delta_sweeps(const KnotGrid &knots, const SweepConfig &config = {});

// ---------------------------------------------------------------------------
// Display characterization

struct CharacterizationReading
{
  ColorTriplet u;       // stimulus, unprocessed
  ColorTriplet v;       // post-processed value sent to the display
  Vec3 xyz;             // chromatic displays
  double luminance = 0; // Y for chromatic displays, L for achromatic ones
};

/// Shows each stimulus through the pipeline with `tonemap` and reads the
/// display model. Achromatic displays need gray stimuli.
std::vector<CharacterizationReading> simulate_characterization(const DisplayModel &display, const Tonemap &tonemap,
                                                               const std::vector<ColorTriplet> &stimuli);

std::vector<ColorTriplet> gray_ramp(const std::vector<double> &levels);
std::vector<ColorTriplet> channel_ramp(std::size_t channel, const std::vector<double> &levels);

/// `count` evenly spaced values over [lo, hi].
std::vector<double> linear_levels(double lo, double hi, std::size_t count);

struct LinearityReport
{
  double slope = 0.0;             // through-origin least squares
  double max_relative_error = 0.0; // max |y - slope x| / (slope x) over the points used
  double worst_x = 0.0;
  std::size_t points = 0;
};

/// Fits y = b x through the origin over points with x >= threshold.
LinearityReport linearity_through_origin(const std::vector<double> &x, const std::vector<double> &y,
                                         double threshold);
/// Deviation from a given proportionality constant over points with x >= threshold.
LinearityReport linearity_against(const std::vector<double> &x, const std::vector<double> &y, double slope,
                                  double threshold);

void write_characterization_csv(std::ostream &out, const std::vector<CharacterizationReading> &readings);

} // namespace hdrp

#endif // HDRP_HARNESS_HPP
