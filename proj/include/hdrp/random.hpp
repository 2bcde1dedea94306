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

#ifndef HDRP_RANDOM_HPP
#define HDRP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hdrp
{

/// SplitMix64 stream keyed by (seed, stream index). Sample i of a generated
/// set always draws from stream i, so sharded generation reproduces the
/// sequential result bit for bit. Distributions are implemented here rather
/// than taken from <random>, whose outputs differ between standard libraries.
class CounterRng
{
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL)))
  {
  }

  std::uint64_t next() noexcept
  {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller (one value per call).
  double normal() noexcept
  {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  static std::uint64_t mix(std::uint64_t z) noexcept
  {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

} // namespace hdrp

#endif // HDRP_RANDOM_HPP
