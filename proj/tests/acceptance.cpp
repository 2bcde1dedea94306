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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances are fixed here, not tuned.

#include "hdrp/calibration.hpp"
#include "hdrp/colorspace.hpp"
#include "hdrp/cube_lut.hpp"
#include "hdrp/display.hpp"
#include "hdrp/error.hpp"
#include "hdrp/harness.hpp"
#include "hdrp/random.hpp"
#include "hdrp/scene.hpp"
#include "fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace hdrp;

namespace
{

struct Outcome
{
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string &what)
  {
    pass = pass && ok;
    if (!detail.empty())
      detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(const char *f, double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::vector<double> active_vector(const KnotGrid &knots) { return {knots.active().begin(), knots.active().end()}; }

// -------------------------------------------------------------------------

Outcome srgb_round_trip()
{
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i)
  {
    const double x = i / 9999.0;
    worst = std::max(worst, std::abs(srgb_encode(srgb_decode(x)) - x));
  }
  o.require(worst <= 1e-12, "max |encode(decode(x)) - x| = " + fmt("%.2e", worst) + " <= 1e-12");
  const double xb = kSrgbDecodeBreak;
  const double jump_decode = std::abs(srgb_decode(xb) - srgb_decode(std::nextafter(xb, 1.0)));
  const double yb = kSrgbEncodeBreak;
  const double jump_encode = std::abs(srgb_encode(yb) - srgb_encode(std::nextafter(yb, 1.0)));
  o.require(jump_decode < 1e-7 && jump_encode < 1e-7,
            "breakpoint jumps " + fmt("%.2e", jump_decode) + ", " + fmt("%.2e", jump_encode) + " < 1e-7");
  return o;
}

std::vector<SceneSample> lambert(std::size_t count, std::uint64_t seed, bool quantize)
{
  GenerateConfig g;
  g.count = count;
  g.seed = seed;
  g.quantize = quantize;
  g.scale = 0.822;
  return generate_samples(g, Tonemap::identity());
}

Outcome scale_recovery()
{
  Outcome o;
  const double cq = estimate_scale_constant(lambert(5000, 2024, true)).c;
  o.require(rel(cq, 0.822) <= 0.005, "quantized c = " + fmt("%.6f", cq) + " (rel " + fmt("%.2e", rel(cq, 0.822)) +
                                         " <= 0.5%)");
  const double c = estimate_scale_constant(lambert(5000, 2024, false)).c;
  o.require(std::abs(c - 0.822) <= 1e-9, "unquantized |c - 0.822| = " + fmt("%.2e", std::abs(c - 0.822)) + " <= 1e-9");
  return o;
}

Outcome delta_peak()
{
  Outcome o;
  const KnotGrid knots = KnotGrid::defaults(KnotSource::Delta);
  const auto act = active_vector(knots);
  const CubeLUT lut = make_delta_cube(16);
  const auto t = [&](double x) { return interpolate_cube(act, lut, ColorTriplet::uniform(x)).r; };

  // Dense log sweep for the peak location.
  double best_x = 0.0, best_t = -1.0;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double x = std::exp(std::log(0.1) + (std::log(1.0) - std::log(0.1)) * i / (n - 1.0));
    const double y = t(x);
    if (y > best_t)
    {
      best_t = y;
      best_x = x;
    }
  }
  o.require(rel(best_x, 0.4406) <= 0.005, "sweep argmax at u = " + fmt("%.5f", best_x));
  o.require(std::abs(t(0.4406) - 1.0) <= 1e-12, "value at the knot " + fmt("%.12f", t(0.4406)));

  // Line through two interior points of each flank, extended to zero.
  const auto intercept = [&](double a, double b) {
    const double ya = t(a), yb = t(b);
    return a - ya * (b - a) / (yb - ya);
  };
  const double left = intercept(0.35, 0.42);
  const double right = intercept(0.47, 0.58);
  o.require(rel(left, 0.3236) <= 1e-9 && rel(right, 0.5938) <= 1e-9,
            "flank zeros at " + fmt("%.6f", left) + ", " + fmt("%.6f", right));
  o.require(t(0.3236) == 0.0 && t(0.5938) == 0.0 && t(0.3) == 0.0 && t(0.7) == 0.0, "zero outside the flanks");
  return o;
}

Outcome delta_recovery()
{
  Outcome o;
  const KnotGrid truth = KnotGrid::defaults(KnotSource::Delta);
  const DeltaEstimateResult res = estimate_knots_delta(synthesize_delta_sweeps(truth));
  const double worst = fixture::worst_relative(res.knots, truth);
  o.require(res.knots.active_count() == 30 && worst <= 0.005,
            std::to_string(res.knots.active_count()) + " knots, worst rel " + fmt("%.2e", worst) + " <= 0.5%");
  return o;
}

Outcome optimize_recovery()
{
  Outcome o;
  const KnotGrid truth = KnotGrid::defaults(KnotSource::Delta);
  const KnotGrid init = fixture::perturbed(truth, 0.10);
  {
    const auto data = fixture::power_datasets(truth, {1.0, 0.5, 2.0}, 5000, false);
    const KnotOptimizeResult r = estimate_knots_optimize(data, init);
    const double worst = fixture::worst_relative(r.knots, truth);
    o.require(worst <= 0.02, "noiseless worst rel " + fmt("%.2e", worst) + " <= 2%");
  }
  {
    const auto data = fixture::power_datasets(truth, {1.0, 0.5, 2.0}, 5000, true);
    const KnotOptimizeResult r = estimate_knots_optimize(data, init);
    o.require(r.holdout_median_abs_255 <= 1.0,
              "quantized holdout median " + fmt("%.3f", r.holdout_median_abs_255) + "/255 <= 1/255");
  }
  return o;
}

Outcome gamma_exactness()
{
  Outcome o;
  const AchromaticDisplay d = fixture::achromatic_2_98_22();
  const GammaCorrectionSpec spec{d, 1.0};
  const double u0 = spec.cutoff(0);
  double worst_prop = 0.0, worst_floor = 0.0;
  for (int i = 0; i <= 10000; ++i)
  {
    const double u = i / 10000.0;
    const double L = achromatic_luminance(d, srgb_encode(gamma_tonemap_achromatic(spec, u)));
    if (u >= u0)
      worst_prop = std::max(worst_prop, rel(L, (d.L0 + d.L1) * u));
    else
      worst_floor = std::max(worst_floor, std::abs(L - d.L0));
  }
  o.require(worst_prop < 1e-9, "exact: max rel " + fmt("%.2e", worst_prop) + " < 1e-9 on [u0, 1]");
  o.require(worst_floor <= 1e-12, "exact: L = L0 below u0 = " + fmt("%.4f", u0));

  const KnotGrid knots = KnotGrid::defaults(KnotSource::Delta);
  const CorrectionCube cc = build_correction_cube(spec, knots, true);
  const Tonemap f = Tonemap::external(knots, cc.lut);
  double worst = 0.0, at = 0.0;
  for (int i = 0; i <= 4900; ++i)
  {
    const double u = 0.02 + 0.98 * i / 4900.0;
    const double L = achromatic_luminance(d, post_process(ColorTriplet::uniform(u), f).r);
    const double e = rel(L, (d.L0 + d.L1) * u);
    if (e > worst)
    {
      worst = e;
      at = u;
    }
  }
  o.require(worst <= 0.005, "refined cube: max rel " + fmt("%.4f", worst) + " at u = " + fmt("%.4f", at) +
                                " (limit 0.005)");
  return o;
}

Outcome chromatic_loop()
{
  Outcome o;
  const ChromaticDisplay truth = fixture::chromatic_three_gammas();
  const ChromaticDisplay fit = fit_chromatic(fixture::chromatic_readings(truth));
  double worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
  {
    worst = std::max(worst, rel(fit.activations[k].gamma, truth.activations[k].gamma));
    worst = std::max(worst, rel(fit.weights[k], truth.weights[k]));
    for (std::size_t c = 0; c < 3; ++c)
    {
      worst = std::max(worst, rel(fit.primaries[k][c], truth.primaries[k][c]));
      worst = std::max(worst, rel(fit.background[c], truth.background[c]));
    }
  }
  o.require(worst <= 1e-6, "fit: worst rel " + fmt("%.2e", worst) + " <= 1e-6");

  const KnotGrid knots = KnotGrid::defaults(KnotSource::Delta);
  const CorrectionCube cc = build_correction_cube({fit, 1.0}, knots, true);
  const Tonemap f = Tonemap::external(knots, cc.lut);
  const auto levels = linear_levels(0.05, 1.0, 951);
  double cube_worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
  {
    std::vector<double> coef;
    for (const auto &r : simulate_characterization(fit, f, channel_ramp(k, levels)))
      coef.push_back(primary_coefficients(fit, r.xyz)[k]);
    cube_worst = std::max(cube_worst, linearity_through_origin(levels, coef, 0.05).max_relative_error);
  }
  o.require(cube_worst <= 0.01, "cube: worst deviation from a line through the origin " + fmt("%.4f", cube_worst) +
                                    " (limit 0.01)");
  return o;
}

Outcome oracle_self_consistency()
{
  Outcome o;
  const KnotGrid knots = KnotGrid::defaults(KnotSource::Optimized);
  const Tonemap cube = Tonemap::external(knots, make_power_cube(knots, 0.5, 4.0));
  double worst = 0.0;
  for (MaterialKind kind : {MaterialKind::Lambertian, MaterialKind::Unlit})
    for (const Tonemap *f : {&cube, static_cast<const Tonemap *>(nullptr)})
    {
      GenerateConfig g;
      g.count = 2000;
      g.seed = 8;
      g.kind = kind;
      ValidationConfig vc;
      if (f)
        vc.tonemap = *f;
      const auto samples = generate_samples(g, vc.tonemap);
      worst = std::max(worst, validate_model(samples, vc).median_abs_255);
    }
  o.require(worst <= 1e-9 * 255, "worst median " + fmt("%.2e", worst) + "/255 over 4 configurations");
  return o;
}

template <typename E> bool throws(const std::string &text, const std::function<bool(const E &)> &check)
{
  try
  {
    (void)parse_cube(text);
  }
  catch (const E &e)
  {
    return check(e);
  }
  catch (...)
  {
    return false;
  }
  return false;
}

Outcome cube_round_trip()
{
  Outcome o;
  double worst = 0.0;
  std::size_t sizes_ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t)
  {
    const std::size_t n = t == 0 ? 2 : (t == 1 ? 32 : 2 + t % 15);
    CounterRng rng(77, t);
    std::vector<ColorTriplet> data(n * n * n);
    for (auto &c : data)
      c = {rng.uniform(), rng.uniform(), rng.uniform()};
    const CubeLUT lut(n, data);
    const CubeLUT back = parse_cube(serialize_cube(lut)).lut;
    sizes_ok += back.size() == n;
    for (std::size_t e = 0; e < data.size(); ++e)
      for (std::size_t k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(back.data()[e][k] - data[e][k]));
  }
  o.require(sizes_ok == 100 && worst < 1e-6, "100 LUTs, max component error " + fmt("%.2e", worst) + " < 1e-6");

  const bool truncated = throws<FormatError>("LUT_3D_SIZE 2\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n",
                                             [](const FormatError &e) {
                                               return e.kind() == ErrorKind::Format && e.line() == 8;
                                             });
  const bool token = throws<FormatError>("LUT_3D_SIZE 2\n0 0 0\n0 x 0\n", [](const FormatError &e) {
    return e.line() == 3 && e.column() == 3;
  });
  const bool one_d = throws<UnsupportedError>("LUT_1D_SIZE 3\n", [](const UnsupportedError &e) {
    return e.kind() == ErrorKind::Unsupported;
  });
  const bool no_size = throws<FormatError>("TITLE \"x\"\n", [](const FormatError &e) {
    return e.kind() == ErrorKind::Format;
  });
  o.require(truncated && token && one_d && no_size, "structured errors: truncation, bad token, 1D, missing size");
  return o;
}

Outcome light_direction()
{
  Outcome o;
  const auto dist = [](const Vec3 &a, const Vec3 &b) { return norm(a - b); };
  const double e1 = dist(light_direction_from_rotation({0, 0, 0}), {0, 0, -1});
  const double e2 = dist(light_direction_from_rotation({90, 0, 0}), {0, 1, 0});
  const double e3 = dist(light_direction_from_rotation({0, 90, 0}), {-1, 0, 0});
  o.require(std::max({e1, e2, e3}) <= 1e-12, "identities within " + fmt("%.1e", std::max({e1, e2, e3})));
  bool z_free = true;
  CounterRng rng(9, 0);
  for (int i = 0; i < 1000; ++i)
  {
    const double x = rng.uniform(-180, 180), y = rng.uniform(-180, 180), z = rng.uniform(-360, 360);
    z_free = z_free && light_direction_from_rotation({x, y, z}) == light_direction_from_rotation({x, y, 0});
  }
  o.require(z_free, "Z has no effect over 1000 random rotations");
  return o;
}

struct Criterion
{
  int id;
  const char *name;
  double time_limit; // seconds; 0 for none
  Outcome (*run)();
};

} // namespace

int main()
{
  const Criterion criteria[] = {
    {1, "sRGB round trip", 1.0, srgb_round_trip},
    {2, "scale-constant recovery", 10.0, scale_recovery},
    {3, "delta-cube peak", 0.0, delta_peak},
    {4, "knot recovery (delta mode)", 10.0, delta_recovery},
    {5, "knot recovery (optimize mode)", 0.0, optimize_recovery},
    {6, "gamma-correction exactness", 10.0, gamma_exactness},
    {7, "chromatic closed loop", 0.0, chromatic_loop},
    {8, "oracle self-consistency", 0.0, oracle_self_consistency},
    {9, "cube parse/serialize round trip", 0.0, cube_round_trip},
    {10, "lighting-direction identities", 0.0, light_direction},
  };
  int failed = 0;
  for (const Criterion &c : criteria)
  {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &e)
    {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0)
      o.require(secs < c.time_limit, "runtime " + fmt("%.2f", secs) + " s < " + fmt("%.0f", c.time_limit) + " s");
    else
      o.detail += "; runtime " + fmt("%.2f", secs) + " s";
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
