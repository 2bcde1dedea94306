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

#ifndef HDRP_CALIBRATION_HPP
#define HDRP_CALIBRATION_HPP

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
// Gamma correction

/// Target display plus the range constant r: unprocessed values in [0, r] map
/// onto the displayable range, proportionally above the cutoff u0.
struct GammaCorrectionSpec
{
  DisplayModel display;
  double r = 1.0;

  /// Background-to-range ratio w per channel (the same for all three channels
  /// of an achromatic display).
  double w(std::size_t channel) const;
  /// u0 = r w / (1 + w).
  double cutoff(std::size_t channel) const;
  /// Activation of the channel, used to invert the display response.
  const GammaActivation &activation(std::size_t channel) const;
};

void validate(const GammaCorrectionSpec &spec);

/// f(u) = s(h^-1(clamp((1 + w) u / r - w, 0, 1))) for one channel.
double gamma_tonemap_channel(const GammaCorrectionSpec &spec, std::size_t channel, double u);

/// Achromatic form; `spec.display` must hold an AchromaticDisplay.
double gamma_tonemap_achromatic(const GammaCorrectionSpec &spec, double u);

/// Per-channel form with channel-specific w_k and gamma_k.
ColorTriplet gamma_tonemap_chromatic(const GammaCorrectionSpec &spec, const ColorTriplet &u);

inline constexpr std::size_t kRefinementGridPoints = 2048;

struct CorrectionCube
{
  CubeLUT lut;
  double sse_point = 0.0;   // dense-grid SSE of the knot-point construction
  double sse_final = 0.0;   // dense-grid SSE of `lut`
  bool refined = false;     // true when refinement replaced the point construction
  std::vector<std::string> warnings;
};

/// Dense evaluation grid for refinement: 0, r and kRefinementGridPoints
/// log-spaced values over [u*_3, r].
std::vector<double> refinement_grid(const KnotGrid &knots, double r);

/// Sum over channels and grid points of (interpolated - exact)^2 for a
/// separable cube.
double correction_sse(const GammaCorrectionSpec &spec, const KnotGrid &knots, const CubeLUT &lut);

/// Point construction t_ijk = (f_r(u*_i), f_g(u*_j), f_b(u*_k)), optionally
/// refined per channel by bounded linear least squares on the dense grid. The
/// refined cube is kept only if its SSE does not exceed the point
/// construction's.
CorrectionCube build_correction_cube(const GammaCorrectionSpec &spec, const KnotGrid &knots, bool refine);

// ---------------------------------------------------------------------------
// Scale constant

struct ScaleEstimate
{
  double c = 0.0;
  double slope = 0.0;          // predicted (c = 1) on actual u, through the origin; c = 1 / slope
  std::size_t points_used = 0; // channel observations
  std::size_t points_saturated = 0;
  double r_squared = 0.0; // uncentered
};

inline constexpr std::size_t kMinScaleSamples = 100;

/// Regresses the c = 1 model prediction on actual u = s(v) per channel.
/// Channels with v = 1 are saturated by the identity tonemap and skipped.
/// Only Lambertian samples are used; at least kMinScaleSamples are needed.
ScaleEstimate estimate_scale_constant(const std::vector<SceneSample> &samples);

// ---------------------------------------------------------------------------
// Knot estimation

/// Scalar sweep through delta cube m: tonemapped output t at inputs u = (x,x,x).
struct DeltaSweep
{
  std::size_t m = 0;
  std::vector<double> u; // strictly increasing
  std::vector<double> t; // in [0,1]
};

void validate(const DeltaSweep &sweep);

// CSV `m,u,t`, sweeps in blocks of consecutive rows.
std::vector<DeltaSweep> read_sweeps_csv(std::istream &in);
void write_sweeps_csv(std::ostream &out, const std::vector<DeltaSweep> &sweeps);

enum class DeltaStatus
{
  Estimated,
  NoResponse, // flat zero output (knots 1 and 2)
  Anomaly,    // not unimodal or flanks unusable; estimate falls back to argmax
};

const char *to_string(DeltaStatus status);

struct DeltaKnotEstimate
{
  std::size_t m = 0;
  DeltaStatus status = DeltaStatus::Estimated;
  double estimate = 0.0; // 0 for NoResponse
  std::size_t rising_points = 0;
  std::size_t falling_points = 0;
  std::string note;
};

struct DeltaEstimateResult
{
  KnotGrid knots;
  std::vector<DeltaKnotEstimate> per_knot;
};

/// Estimates u*_m as the intersection of straight lines fitted to the rising
/// and falling flanks (outputs within [0.2, 0.8] of the peak). A flank that is
/// a plateau at the peak level is replaced by that level. Needs sweeps for
/// every m in 3..n; throws FitError when one is missing or the estimates are
/// not strictly increasing.
DeltaEstimateResult estimate_knots_delta(const std::vector<DeltaSweep> &sweeps);

/// Median of |x| (mean of the two middle values for even counts). Zero for an
/// empty input.
double median_abs(std::vector<double> values);

/// Samples rendered under one known cube.
struct TonemapDataset
{
  std::vector<SceneSample> samples;
  CubeLUT lut;
};

struct KnotOptimizeOptions
{
  double scale = kDefaultScaleConstant;
  double filter_threshold = 0.2; // drop samples with any m_k below this
  double holdout_fraction = 0.2;
  std::uint64_t seed = 1;
  double penalty_weight = 1e4;
  std::size_t max_evaluations = 150000;
  std::size_t restarts = 4;
  double initial_step = 0.02; // in log-knot units
};

struct KnotOptimizeResult
{
  KnotGrid knots;
  double train_sse = 0.0;
  double initial_train_sse = 0.0;
  double train_median_abs_255 = 0.0;
  double holdout_median_abs_255 = 0.0;
  std::size_t train_samples = 0;
  std::size_t holdout_samples = 0;
  std::size_t excluded_samples = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Refines the active knots by minimizing the squared prediction error of v
/// over training samples, in log-knot coordinates with a soft monotonicity
/// penalty. Throws FitError if the result is not strictly increasing.
KnotOptimizeResult estimate_knots_optimize(const std::vector<TonemapDataset> &datasets, const KnotGrid &init,
                                           const KnotOptimizeOptions &options = {});

} // namespace hdrp

#endif // HDRP_CALIBRATION_HPP
