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

#ifndef HDRP_DISPLAY_HPP
#define HDRP_DISPLAY_HPP

#include "hdrp/color.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hdrp
{

/// Activation h(x) = x^gamma on [0,1]. Displays only talk to their activation
/// through apply/inverse, so a more flexible monotone curve can replace it.
struct GammaActivation
{
  double gamma = 2.2;

  double apply(double x) const;
  double inverse(double y) const;
};

struct FitReport
{
  double residual_rms = 0.0;
  std::size_t point_count = 0;
  std::size_t iterations = 0;
  std::vector<double> residuals; // model minus measurement, one per averaged point
};

/// L = L1 h(v) + L0.
struct AchromaticDisplay
{
  double L0 = 0.0; // minimum displayable luminance, cd/m^2
  double L1 = 1.0; // luminance range, cd/m^2
  GammaActivation activation;
  std::optional<FitReport> fit;

  double w() const noexcept { return L0 / L1; }
};

/// x = sum_k h_k(v_k) P_k + z, with P_k the primaries in CIE XYZ.
struct ChromaticDisplay
{
  std::array<Vec3, 3> primaries; // r, g, b
  Vec3 background;               // z
  std::array<GammaActivation, 3> activations;
  // z = sum_k w_k P_k (least squares when z is outside the primaries' span).
  std::array<double, 3> weights{0.0, 0.0, 0.0};
  double weights_residual = 0.0;
  double condition_number = 1.0;
  std::optional<FitReport> fit; // gamma fit, residuals in activation units
};

using DisplayModel = std::variant<AchromaticDisplay, ChromaticDisplay>;

void validate(const AchromaticDisplay &display);
void validate(const ChromaticDisplay &display);

/// One characterization reading: the post-processed value shown and what the
/// instrument reported.
struct LuminanceMeasurement
{
  double v = 0.0;
  double luminance = 0.0;
};

struct XyzMeasurement
{
  ColorTriplet v;
  Vec3 xyz;
};

double achromatic_luminance(const AchromaticDisplay &display, double v);
Vec3 chromatic_xyz(const ChromaticDisplay &display, const ColorTriplet &v);

struct BackgroundWeights
{
  std::array<double, 3> weights{};
  double residual = 0.0;  // |[r g b] w - z|
  double condition = 1.0; // 2-norm condition number of [r g b]
};

/// Solves [r g b] w = z. A rank-deficient matrix throws SingularMatrixError
/// unless `allow_least_squares`, in which case the minimum-norm least-squares
/// solution is returned with its residual.
BackgroundWeights solve_background_weights(const std::array<Vec3, 3> &primaries, const Vec3 &background,
                                           bool allow_least_squares = false);

inline constexpr std::size_t kFitIterationCap = 500;
inline constexpr double kFitStepTolerance = 1e-10;

/// Least-squares fit of (L0, L1, gamma). Repeated v values are averaged first.
/// Needs at least 5 readings covering v <= 0.1 and v >= 0.9; throws FitError on
/// insufficient or degenerate data and ConvergenceError at the iteration cap.
AchromaticDisplay fit_achromatic(const std::vector<LuminanceMeasurement> &measurements);

/// Background from v = (0,0,0), primaries from each channel at full drive,
/// then per-channel gammas fitted to the activations recovered by inverting
/// the primary matrix.
ChromaticDisplay fit_chromatic(const std::vector<XyzMeasurement> &measurements);

/// Primary coefficients c with x = sum_k c_k P_k, i.e. h_k(v_k) + w_k for an
/// in-model reading.
std::array<double, 3> primary_coefficients(const ChromaticDisplay &display, const Vec3 &xyz);

// Measurement CSVs: `v,L` and `v_r,v_g,v_b,X,Y,Z`.
std::vector<LuminanceMeasurement> read_luminance_csv(std::istream &in);
std::vector<XyzMeasurement> read_xyz_csv(std::istream &in);
void write_luminance_csv(std::ostream &out, const std::vector<LuminanceMeasurement> &rows);
void write_xyz_csv(std::ostream &out, const std::vector<XyzMeasurement> &rows);

// JSON documents with a "kind" discriminator.
std::string display_to_json(const DisplayModel &display);
DisplayModel display_from_json(const std::string &text);

} // namespace hdrp

#endif // HDRP_DISPLAY_HPP
