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

// Synthetic fixtures shared by the unit and acceptance tests.

#ifndef HDRP_TESTS_FIXTURES_HPP
#define HDRP_TESTS_FIXTURES_HPP

#include "hdrp/calibration.hpp"
#include "hdrp/display.hpp"
#include "hdrp/harness.hpp"
#include "hdrp/random.hpp"

#include <algorithm>
#include <vector>

namespace fixture
{

inline hdrp::AchromaticDisplay achromatic_2_98_22()
{
  hdrp::AchromaticDisplay d;
  d.L0 = 2.0;
  d.L1 = 98.0;
  d.activation.gamma = 2.2;
  return d;
}

// sRGB-like primaries scaled to a ~100 cd/m^2 white, distinct gammas, and
// z = 0.01 r + 0.02 g + 0.03 b.
inline hdrp::ChromaticDisplay chromatic_three_gammas()
{
  hdrp::ChromaticDisplay d;
  d.primaries = {hdrp::Vec3{41.24, 21.26, 1.93}, hdrp::Vec3{35.76, 71.52, 11.92}, hdrp::Vec3{18.05, 7.22, 95.05}};
  d.background = 0.01 * d.primaries[0] + 0.02 * d.primaries[1] + 0.03 * d.primaries[2];
  d.activations = {hdrp::GammaActivation{1.8}, hdrp::GammaActivation{2.2}, hdrp::GammaActivation{2.6}};
  d.weights = {0.01, 0.02, 0.03};
  return d;
}

// Noiseless characterization readings: black, then 10 levels per channel ramp.
inline std::vector<hdrp::XyzMeasurement> chromatic_readings(const hdrp::ChromaticDisplay &d, double sigma = 0.0,
                                                            std::uint64_t seed = 1)
{
  hdrp::CounterRng rng(seed, 0);
  std::vector<hdrp::XyzMeasurement> rows;
  const auto emit = [&](const hdrp::ColorTriplet &v) {
    hdrp::Vec3 x = d.background;
    for (std::size_t k = 0; k < 3; ++k)
      x = x + std::pow(v[k], d.activations[k].gamma) * d.primaries[k];
    for (std::size_t c = 0; c < 3; ++c)
      x[c] = std::max(0.0, x[c] + sigma * rng.normal());
    rows.push_back({v, x});
  };
  emit({0, 0, 0});
  for (std::size_t k = 0; k < 3; ++k)
    for (int i = 1; i <= 10; ++i)
    {
      hdrp::ColorTriplet v{0, 0, 0};
      v[k] = i / 10.0;
      emit(v);
    }
  return rows;
}

// Lambertian samples rendered under power cubes g(u) = (u / u*_n)^p over
// `knots`, with exposures -7..12 so that unprocessed values reach every knot
// interval. The total is split evenly across exponents.
inline std::vector<hdrp::TonemapDataset> power_datasets(const hdrp::KnotGrid &knots,
                                                        const std::vector<double> &exponents, std::size_t total,
                                                        bool quantize, std::uint64_t seed = 100)
{
  std::vector<hdrp::TonemapDataset> out;
  for (std::size_t j = 0; j < exponents.size(); ++j)
  {
    const hdrp::CubeLUT lut = hdrp::make_power_cube(knots, exponents[j], knots.upper());
    hdrp::GenerateConfig g;
    g.count = total / exponents.size() + (j < total % exponents.size() ? 1 : 0);
    g.seed = seed + j;
    g.quantize = quantize;
    g.ranges.exposures.clear();
    for (int e = -7; e <= 12; ++e)
      g.ranges.exposures.push_back(e);
    out.push_back({hdrp::generate_samples(g, hdrp::Tonemap::external(knots, lut)), lut});
  }
  return out;
}

// Each active knot scaled by an independent factor in [1 - frac, 1 + frac].
inline hdrp::KnotGrid perturbed(const hdrp::KnotGrid &knots, double frac, std::uint64_t seed = 7)
{
  std::vector<double> v;
  for (std::size_t i = 0; i < knots.active_count(); ++i)
  {
    hdrp::CounterRng r(seed, i);
    v.push_back(knots.active()[i] * (1.0 + r.uniform(-frac, frac)));
  }
  std::sort(v.begin(), v.end());
  return hdrp::KnotGrid(std::move(v));
}

inline double worst_relative(const hdrp::KnotGrid &a, const hdrp::KnotGrid &b)
{
  double worst = 0.0;
  for (std::size_t i = a.first_active(); i <= a.size(); ++i)
    worst = std::max(worst, std::abs(a.at(i) / b.at(i) - 1.0));
  return worst;
}

} // namespace fixture

#endif // HDRP_TESTS_FIXTURES_HPP
