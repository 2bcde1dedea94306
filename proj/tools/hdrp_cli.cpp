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


// Command-line front end. Talks to the model only through the C API.

#include "hdrp/hdrp.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

struct CliFailure
{
  int code;
  std::string message;
};

int exit_code_for(hdrp_status s)
{
  switch (s)
  {
  case HDRP_OK:
    return kExitOk;
  case HDRP_ERR_FORMAT:
  case HDRP_ERR_UNSUPPORTED:
  case HDRP_ERR_IO:
    return kExitIo;
  case HDRP_ERR_NULL_ARGUMENT:
  case HDRP_ERR_INVALID_ARGUMENT:
    return kExitUsage;
  default:
    return kExitFailure;
  }
}

void check(hdrp_status s, const std::string &what)
{
  if (s != HDRP_OK)
    throw CliFailure{exit_code_for(s), what + ": " + hdrp_last_error()};
}

[[noreturn]] void usage_error(const std::string &msg) { throw CliFailure{kExitUsage, msg}; }

template <typename T, void (*Free)(T *)> struct Deleter
{
  void operator()(T *p) const { Free(p); }
};
template <typename T, void (*Free)(T *)> using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Knots = Handle<hdrp_knots, hdrp_knots_free>;
using Cube = Handle<hdrp_cube, hdrp_cube_free>;
using Tonemap = Handle<hdrp_tonemap, hdrp_tonemap_free>;
using Samples = Handle<hdrp_samples, hdrp_samples_free>;
using Sweeps = Handle<hdrp_sweeps, hdrp_sweeps_free>;
using DeltaReport = Handle<hdrp_delta_report, hdrp_delta_report_free>;
using Display = Handle<hdrp_display, hdrp_display_free>;
using Report = Handle<hdrp_report, hdrp_report_free>;
using Characterization = Handle<hdrp_characterization, hdrp_characterization_free>;

struct Global
{
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
};

Global g;

// Informational messages go to stderr unless --quiet.
__attribute__((format(printf, 1, 2))) void info(const char *fmt, ...)
{
  if (g.quiet)
    return;
  std::va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

std::string out_path() { return g.out.empty() ? "-" : g.out; }

// Sidecar with the resolved configuration; written only next to real files.
void write_meta(const std::string &command, const nlohmann::ordered_json &config)
{
  if (g.out.empty())
    return;
  nlohmann::ordered_json meta;
  meta["tool"] = "hdrp";
  meta["version"] = hdrp_version();
  meta["command"] = command;
  meta["seed"] = g.seed;
  meta["config"] = config;
  const std::filesystem::path out(g.out);
  const std::string path =
    std::filesystem::is_directory(out) ? (out / "meta.json").string() : g.out + ".meta.json";
  std::ofstream f(path, std::ios::trunc);
  f << meta.dump(2) << '\n';
  if (!f)
    throw CliFailure{kExitIo, "cannot write metadata file '" + path + "'"};
}

Knots resolve_knots(const std::string &spec)
{
  hdrp_knots *k = nullptr;
  if (spec == "delta")
    check(hdrp_knots_default(HDRP_KNOTS_DELTA, &k), "knots");
  else if (spec == "optimized")
    check(hdrp_knots_default(HDRP_KNOTS_OPTIMIZED, &k), "knots");
  else
    check(hdrp_knots_load(spec.c_str(), &k), "loading knots '" + spec + "'");
  return Knots(k);
}

Cube load_cube(const std::string &path)
{
  hdrp_cube *c = nullptr;
  check(hdrp_cube_load(path.c_str(), &c), "loading cube '" + path + "'");
  Cube cube(c);
  for (size_t i = 0; i < hdrp_cube_warning_count(c); ++i)
    info("warning: %s: %s", path.c_str(), hdrp_cube_warning(c, i));
  return cube;
}

Tonemap resolve_tonemap(const std::string &spec, const hdrp_knots *knots)
{
  hdrp_tonemap *t = nullptr;
  if (spec == "none")
  {
    check(hdrp_tonemap_identity(&t), "tonemap");
    return Tonemap(t);
  }
  const Cube cube = load_cube(spec);
  check(hdrp_tonemap_external(knots, cube.get(), &t), "tonemap '" + spec + "'");
  return Tonemap(t);
}

Samples load_samples(const std::string &path)
{
  hdrp_samples *s = nullptr;
  check(hdrp_samples_load(path.c_str(), &s), "loading samples '" + path + "'");
  Samples samples(s);
  for (size_t i = 0; i < hdrp_samples_rejected_count(s); ++i)
  {
    size_t line = 0;
    const char *why = nullptr;
    check(hdrp_samples_rejected(s, i, &line, &why), "rejected rows");
    info("rejected %s line %zu: %s", path.c_str(), line, why);
  }
  return samples;
}

Display load_display(const std::string &path)
{
  hdrp_display *d = nullptr;
  check(hdrp_display_load(path.c_str(), &d), "loading display '" + path + "'");
  return Display(d);
}

std::vector<double> parse_range(const std::string &text, const char *flag)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    }
    catch (const std::exception &)
    {
      usage_error(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::pair<double, double> parse_pair(const std::string &text, const char *flag)
{
  const auto v = parse_range(text, flag);
  if (v.size() != 2)
    usage_error(std::string(flag) + " takes lo,hi");
  return {v[0], v[1]};
}

// ---- subcommands ----

struct SimulateArgs
{
  std::size_t samples = 1000;
  std::string material = "lambert";
  std::string tonemap = "none";
  std::string knots = "optimized";
  bool quantize = false;
  double c = 0.822;
  std::string exposures = "0";
  std::string ambient = "0,1";
  std::string directional_intensity = "0,2";
  std::string ambient_intensity = "0,2";
};

void run_simulate(const SimulateArgs &a)
{
  const Knots knots = resolve_knots(a.knots);
  const Tonemap tonemap = resolve_tonemap(a.tonemap, knots.get());
  hdrp_generate_config cfg;
  hdrp_generate_config_default(&cfg);
  cfg.count = a.samples;
  cfg.seed = g.seed;
  cfg.kind = a.material == "unlit" ? HDRP_UNLIT : HDRP_LAMBERTIAN;
  cfg.quantize = a.quantize ? 1 : 0;
  cfg.c = a.c;
  const auto exposures = parse_range(a.exposures, "--exposures");
  cfg.exposures = exposures.data();
  cfg.exposure_count = exposures.size();
  std::tie(cfg.ambient_color_lo, cfg.ambient_color_hi) = parse_pair(a.ambient, "--ambient-range");
  std::tie(cfg.directional_intensity_lo, cfg.directional_intensity_hi) =
    parse_pair(a.directional_intensity, "--id-range");
  std::tie(cfg.ambient_intensity_lo, cfg.ambient_intensity_hi) = parse_pair(a.ambient_intensity, "--ia-range");

  hdrp_samples *s = nullptr;
  check(hdrp_samples_generate(&cfg, tonemap.get(), &s), "simulate");
  const Samples samples(s);
  check(hdrp_samples_save(s, out_path().c_str()), "writing samples");
  info("wrote %zu samples", hdrp_samples_count(s));
  write_meta("simulate", {{"samples", a.samples},
                          {"material", a.material},
                          {"tonemap", a.tonemap},
                          {"knots", a.knots},
                          {"quantize", a.quantize},
                          {"c", a.c},
                          {"exposures", exposures},
                          {"ambient_range", a.ambient},
                          {"id_range", a.directional_intensity},
                          {"ia_range", a.ambient_intensity}});
}

void run_fit_c(const std::string &in)
{
  const Samples samples = load_samples(in);
  hdrp_scale_result r{};
  check(hdrp_estimate_scale(samples.get(), &r), "fit-c");
  nlohmann::ordered_json j{{"c", r.c},
                           {"slope", r.slope},
                           {"points_used", r.points_used},
                           {"points_saturated", r.points_saturated},
                           {"r_squared", r.r_squared}};
  const std::string body = j.dump(2) + "\n";
  if (g.out.empty())
  {
    std::cout << body;
  }
  else
  {
    std::ofstream f(g.out, std::ios::trunc);
    f << body;
    if (!f)
      throw CliFailure{kExitIo, "cannot write '" + g.out + "'"};
  }
  info("c = %.6f (%zu channel observations, %zu saturated skipped)", r.c, r.points_used, r.points_saturated);
  write_meta("fit-c", {{"in", in}});
}

void run_gen_delta_cubes(std::size_t size)
{
  if (g.out.empty())
    usage_error("gen-delta-cubes needs --out <dir>");
  std::error_code ec;
  std::filesystem::create_directories(g.out, ec);
  if (ec)
    throw CliFailure{kExitIo, "cannot create directory '" + g.out + "': " + ec.message()};
  for (std::size_t m = 1; m <= size; ++m)
  {
    hdrp_cube *c = nullptr;
    check(hdrp_cube_delta(m, size, &c), "delta cube");
    const Cube cube(c);
    char name[32];
    std::snprintf(name, sizeof name, "delta_%02zu.cube", m);
    const std::string path = (std::filesystem::path(g.out) / name).string();
    check(hdrp_cube_save(c, path.c_str()), "writing '" + path + "'");
  }
  info("wrote %zu delta cubes to %s", size, g.out.c_str());
}

struct SweepArgs
{
  std::string knots = "delta";
  double lo = 1e-5;
  double hi = 100.0;
  std::size_t points = 2000;
};

void run_sweep(const SweepArgs &a)
{
  const Knots knots = resolve_knots(a.knots);
  hdrp_sweeps *s = nullptr;
  check(hdrp_sweeps_synthesize(knots.get(), a.lo, a.hi, a.points, &s), "sweep");
  const Sweeps sweeps(s);
  check(hdrp_sweeps_save(s, out_path().c_str()), "writing sweeps");
  write_meta("sweep", {{"knots", a.knots}, {"lo", a.lo}, {"hi", a.hi}, {"points", a.points}});
}

struct EstimateArgs
{
  std::string mode = "delta";
  std::vector<std::string> in;
  std::vector<std::string> tonemaps;
  std::string init = "delta";
  double c = 0.822;
  double filter_m = 0.2;
  double holdout = 0.2;
  std::size_t max_evals = 150000;
};

void run_estimate_knots(const EstimateArgs &a)
{
  if (a.in.empty())
    usage_error("estimate-knots needs --in");
  hdrp_knots *k = nullptr;
  nlohmann::ordered_json cfg{{"mode", a.mode}, {"in", a.in}};
  if (a.mode == "delta")
  {
    if (a.in.size() != 1)
      usage_error("delta mode takes exactly one --in sweep file");
    hdrp_sweeps *s = nullptr;
    check(hdrp_sweeps_load(a.in[0].c_str(), &s), "loading sweeps '" + a.in[0] + "'");
    const Sweeps sweeps(s);
    hdrp_delta_report *r = nullptr;
    check(hdrp_estimate_knots_delta(s, &k, &r), "estimate-knots");
    const DeltaReport report(r);
    for (size_t i = 0; i < hdrp_delta_report_count(r); ++i)
    {
      size_t m = 0;
      hdrp_delta_status st{};
      double est = 0.0;
      const char *note = nullptr;
      check(hdrp_delta_report_get(r, i, &m, &st, &est, &note), "report");
      if (st == HDRP_DELTA_NO_RESPONSE)
        info("knot %2zu: no response", m);
      else
        info("knot %2zu: %.6g%s%s%s", m, est, st == HDRP_DELTA_ANOMALY ? " (anomaly)" : "", *note ? " " : "", note);
    }
  }
  else
  {
    if (a.tonemaps.size() != a.in.size())
      usage_error("optimize mode needs one --tonemap cube per --in sample file");
    const Knots init = resolve_knots(a.init);
    std::vector<Samples> samples;
    std::vector<Cube> cubes;
    std::vector<const hdrp_samples *> sp;
    std::vector<const hdrp_cube *> cp;
    for (std::size_t i = 0; i < a.in.size(); ++i)
    {
      samples.push_back(load_samples(a.in[i]));
      cubes.push_back(load_cube(a.tonemaps[i]));
      sp.push_back(samples.back().get());
      cp.push_back(cubes.back().get());
    }
    hdrp_optimize_options o;
    hdrp_optimize_options_default(&o);
    o.c = a.c;
    o.filter_threshold = a.filter_m;
    o.holdout_fraction = a.holdout;
    o.seed = g.seed;
    o.max_evaluations = a.max_evals;
    hdrp_optimize_result r{};
    check(hdrp_estimate_knots_optimize(sp.data(), cp.data(), sp.size(), init.get(), &o, &k, &r), "estimate-knots");
    if (!r.converged)
      info("warning: simplex search hit the evaluation cap; returning the best point found");
    info("train: %zu samples, sse %.6g (initial %.6g), median |error| %.3f/255", r.train_samples, r.train_sse,
         r.initial_train_sse, r.train_median_abs_255);
    info("holdout: %zu samples, median |error| %.3f/255; excluded %zu", r.holdout_samples, r.holdout_median_abs_255,
         r.excluded_samples);
    cfg["tonemap"] = a.tonemaps;
    cfg["init"] = a.init;
    cfg["c"] = a.c;
    cfg["filter_m"] = a.filter_m;
    cfg["holdout"] = a.holdout;
    cfg["max_evals"] = a.max_evals;
  }
  const Knots knots(k);
  check(hdrp_knots_save(k, out_path().c_str()), "writing knots");
  write_meta("estimate-knots", cfg);
}

void run_fit_display(const std::string &in, const std::string &mode)
{
  hdrp_display *d = nullptr;
  check(hdrp_display_fit(in.c_str(), mode == "chromatic" ? HDRP_DISPLAY_CHROMATIC : HDRP_DISPLAY_ACHROMATIC, &d),
        "fit-display");
  const Display display(d);
  double rms = 0.0;
  size_t points = 0;
  check(hdrp_display_fit_summary(d, &rms, &points), "fit summary");
  info("fitted %s display on %zu points, residual rms %.6g", mode.c_str(), points, rms);
  check(hdrp_display_save(d, out_path().c_str()), "writing display");
  write_meta("fit-display", {{"in", in}, {"mode", mode}});
}

struct MakeCubeArgs
{
  std::string display;
  double r = 1.0;
  bool refine = false;
  std::string knots = "optimized";
};

void run_make_cube(const MakeCubeArgs &a)
{
  const Display display = load_display(a.display);
  const Knots knots = resolve_knots(a.knots);
  hdrp_cube *c = nullptr;
  hdrp_cube_info ci{};
  check(hdrp_make_correction_cube(display.get(), a.r, knots.get(), a.refine ? 1 : 0, &c, &ci), "make-cube");
  const Cube cube(c);
  for (size_t i = 0; i < hdrp_cube_warning_count(c); ++i)
    info("warning: %s", hdrp_cube_warning(c, i));
  info("grid sse: point %.6g, final %.6g%s", ci.sse_point, ci.sse_final, ci.refined ? " (refined)" : "");
  check(hdrp_cube_save(c, out_path().c_str()), "writing cube");
  write_meta("make-cube", {{"display", a.display}, {"r", a.r}, {"refine", a.refine}, {"knots", a.knots}});
}

struct GenCubeArgs
{
  double exponent = 1.0;
  double scale = 0.0; // 0: the last knot
  std::string knots = "optimized";
};

void run_gen_cube(const GenCubeArgs &a)
{
  const Knots knots = resolve_knots(a.knots);
  double scale = a.scale;
  if (scale == 0.0)
  {
    size_t n = 0;
    check(hdrp_knots_size(knots.get(), &n), "knots");
    check(hdrp_knots_get(knots.get(), n, &scale), "knots");
  }
  hdrp_cube *c = nullptr;
  check(hdrp_cube_power(knots.get(), a.exponent, scale, &c), "gen-cube");
  const Cube cube(c);
  check(hdrp_cube_save(c, out_path().c_str()), "writing cube");
  write_meta("gen-cube", {{"exponent", a.exponent}, {"scale", scale}, {"knots", a.knots}});
}

struct CharacterizeArgs
{
  std::string display;
  std::string tonemap = "none";
  std::string knots = "optimized";
  std::size_t levels = 21;
  std::string channel = "gray";
  double threshold = 0.05;
};

void run_characterize(const CharacterizeArgs &a)
{
  const Display display = load_display(a.display);
  const Knots knots = resolve_knots(a.knots);
  const Tonemap tonemap = resolve_tonemap(a.tonemap, knots.get());
  if (a.levels < 2)
    usage_error("--levels must be at least 2");

  std::vector<int> channels;
  if (a.channel == "gray")
    channels = {-1};
  else if (a.channel == "all")
    channels = {0, 1, 2};
  else
    channels = {a.channel == "r" ? 0 : a.channel == "g" ? 1 : 2};

  std::vector<double> stimuli;
  for (int ch : channels)
    for (std::size_t i = 0; i < a.levels; ++i)
    {
      const double u = static_cast<double>(i) / static_cast<double>(a.levels - 1);
      for (int k = 0; k < 3; ++k)
        stimuli.push_back(ch < 0 || ch == k ? u : 0.0);
    }
  hdrp_characterization *c = nullptr;
  check(hdrp_characterize(display.get(), tonemap.get(), stimuli.data(), stimuli.size() / 3, &c), "characterize");
  const Characterization readings(c);

  hdrp_display_kind kind{};
  check(hdrp_display_kind_of(display.get(), &kind), "display");
  double primaries[9], background[3], weights[3];
  if (kind == HDRP_DISPLAY_CHROMATIC)
    check(hdrp_display_chromatic_params(display.get(), primaries, background, nullptr, weights), "display");

  for (std::size_t ci = 0; ci < channels.size(); ++ci)
  {
    const int ch = channels[ci];
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.levels; ++i)
    {
      double u[3], xyz[3], lum = 0.0;
      check(hdrp_characterization_get(c, ci * a.levels + i, u, nullptr, xyz, &lum), "reading");
      if (ch < 0)
      {
        x.push_back(u[0]);
        y.push_back(lum);
      }
      else if (kind == HDRP_DISPLAY_CHROMATIC)
      {
        // Luminance above background, relative to the channel's primary.
        x.push_back(u[ch]);
        y.push_back((lum - background[1]) / primaries[3 * ch + 1] + weights[ch]);
      }
      else
      {
        usage_error("single-channel ramps need a chromatic display");
      }
    }
    hdrp_linearity lin{};
    check(hdrp_linearity_check(x.data(), y.data(), x.size(), a.threshold, 0.0, &lin), "linearity");
    info("%s: slope %.6g, max relative deviation %.4f%% at u = %.4g (u >= %.3g)",
         ch < 0 ? "gray" : ch == 0 ? "r" : ch == 1 ? "g" : "b", lin.slope, 100.0 * lin.max_relative_error,
         lin.worst_x, a.threshold);
  }
  check(hdrp_characterization_save(c, out_path().c_str()), "writing readings");
  write_meta("characterize", {{"display", a.display},
                              {"tonemap", a.tonemap},
                              {"knots", a.knots},
                              {"levels", a.levels},
                              {"channel", a.channel},
                              {"threshold", a.threshold}});
}

struct ValidateArgs
{
  std::string in;
  std::string knots = "optimized";
  std::string tonemap = "none";
  double c = 0.822;
  double filter_m = 0.2;
  bool quantize = false;
  std::string plot;
};

void run_validate(const ValidateArgs &a)
{
  const Samples samples = load_samples(a.in);
  const Knots knots = resolve_knots(a.knots);
  const Tonemap tonemap = resolve_tonemap(a.tonemap, knots.get());
  hdrp_report *r = nullptr;
  check(hdrp_validate_model(samples.get(), tonemap.get(), a.c, a.quantize ? 1 : 0, a.filter_m, &r), "validate");
  const Report report(r);
  hdrp_report_summary s{};
  check(hdrp_report_summary_get(r, &s), "report");
  info("%zu samples: median |error| %.4f/255, without m_k < %.3g: %.4f/255 (%zu excluded), max %.4f/255", s.samples,
       s.median_abs_255, a.filter_m, s.filtered_median_abs_255, s.excluded, s.max_abs_255);
  check(hdrp_report_save_csv(r, out_path().c_str()), "writing report");
  if (!a.plot.empty())
    check(hdrp_report_save_svg(r, a.plot.c_str()), "writing plot");
  write_meta("validate", {{"in", a.in},
                          {"knots", a.knots},
                          {"tonemap", a.tonemap},
                          {"c", a.c},
                          {"filter_m", a.filter_m},
                          {"quantize", a.quantize},
                          {"plot", a.plot}});
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"HDRP rendering model: simulation, calibration and validation", "hdrp"};
  app.set_version_flag("--version", std::string(hdrp_version()));
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output path (standard output when absent)");
  app.add_flag("--quiet", g.quiet, "Suppress informational messages");

  const auto knots_help = "Knot grid: delta, optimized or a knots CSV path";

  SimulateArgs sim;
  auto *c_sim = app.add_subcommand("simulate", "Generate random scenes and render them");
  c_sim->add_option("--samples", sim.samples, "Number of samples")->check(CLI::PositiveNumber);
  c_sim->add_option("--material", sim.material, "Material kind")->check(CLI::IsMember({"lambert", "unlit"}));
  c_sim->add_option("--tonemap", sim.tonemap, "none or a .cube path");
  c_sim->add_option("--knots", sim.knots, knots_help);
  c_sim->add_flag("--quantize", sim.quantize, "Quantize v to 8 bits");
  c_sim->add_option("--c", sim.c, "Scale constant c");
  c_sim->add_option("--exposures", sim.exposures, "Comma-separated exposure set");
  c_sim->add_option("--ambient-range", sim.ambient, "Ambient color component range lo,hi");
  c_sim->add_option("--id-range", sim.directional_intensity, "Directional intensity range lo,hi");
  c_sim->add_option("--ia-range", sim.ambient_intensity, "Ambient intensity range lo,hi");

  std::string fit_c_in;
  auto *c_fitc = app.add_subcommand("fit-c", "Estimate the scale constant c from untonemapped samples");
  c_fitc->add_option("--in", fit_c_in, "Sample CSV")->required();

  std::size_t delta_size = 32;
  auto *c_delta = app.add_subcommand("gen-delta-cubes", "Write delta_01.cube .. delta_NN.cube into --out");
  c_delta->add_option("--size", delta_size, "Grid size")->check(CLI::Range(2, 256));

  SweepArgs sw;
  auto *c_sweep = app.add_subcommand("sweep", "Synthesize delta-cube sweeps over a knot grid");
  c_sweep->add_option("--knots", sw.knots, knots_help);
  c_sweep->add_option("--lo", sw.lo, "Lowest input");
  c_sweep->add_option("--hi", sw.hi, "Highest input");
  c_sweep->add_option("--points", sw.points, "Log-spaced points per sweep");

  EstimateArgs est;
  auto *c_est = app.add_subcommand("estimate-knots", "Estimate knot coordinates");
  c_est->add_option("--mode", est.mode, "delta or optimize")->check(CLI::IsMember({"delta", "optimize"}));
  c_est->add_option("--in", est.in, "Sweep CSV (delta) or sample CSVs (optimize, repeatable)")->required();
  c_est->add_option("--tonemap", est.tonemaps, "Cube used for each --in (optimize)");
  c_est->add_option("--init", est.init, "Initial knots (optimize)");
  c_est->add_option("--c", est.c, "Scale constant c (optimize)");
  c_est->add_option("--filter-m", est.filter_m, "Drop samples with any m_k below this (optimize)");
  c_est->add_option("--holdout", est.holdout, "Holdout fraction (optimize)");
  c_est->add_option("--max-evals", est.max_evals, "Objective evaluation cap (optimize)");

  std::string fd_in, fd_mode = "achromatic";
  auto *c_fd = app.add_subcommand("fit-display", "Fit a display model to characterization readings");
  c_fd->add_option("--in", fd_in, "Measurement CSV")->required();
  c_fd->add_option("--mode", fd_mode, "Model kind")->check(CLI::IsMember({"achromatic", "chromatic"}));

  MakeCubeArgs mk;
  auto *c_mk = app.add_subcommand("make-cube", "Build a gamma-correction cube for a display");
  c_mk->add_option("--display", mk.display, "Display JSON")->required();
  c_mk->add_option("--r", mk.r, "Range constant r");
  c_mk->add_flag("--refine", mk.refine, "Refine knot outputs by least squares");
  c_mk->add_option("--knots", mk.knots, knots_help);

  GenCubeArgs gc;
  auto *c_gc = app.add_subcommand("gen-cube", "Write a power-law cube min((u/scale)^p, 1)");
  c_gc->add_option("--exponent", gc.exponent, "Exponent p");
  c_gc->add_option("--scale", gc.scale, "Scale (0 = last knot)");
  c_gc->add_option("--knots", gc.knots, knots_help);

  CharacterizeArgs ch;
  auto *c_ch = app.add_subcommand("characterize", "Simulate display readings through a tonemap");
  c_ch->add_option("--display", ch.display, "Display JSON")->required();
  c_ch->add_option("--tonemap", ch.tonemap, "none or a .cube path");
  c_ch->add_option("--knots", ch.knots, knots_help);
  c_ch->add_option("--levels", ch.levels, "Levels per ramp on [0, 1]");
  c_ch->add_option("--channel", ch.channel, "Ramp")->check(CLI::IsMember({"gray", "r", "g", "b", "all"}));
  c_ch->add_option("--threshold", ch.threshold, "Lowest u in the linearity check");

  ValidateArgs va;
  auto *c_va = app.add_subcommand("validate", "Compare model predictions with recorded samples");
  c_va->add_option("--in", va.in, "Sample CSV")->required();
  c_va->add_option("--knots", va.knots, knots_help);
  c_va->add_option("--tonemap", va.tonemap, "none or a .cube path");
  c_va->add_option("--c", va.c, "Scale constant c");
  c_va->add_option("--filter-m", va.filter_m, "Material threshold for the filtered median");
  c_va->add_flag("--quantize", va.quantize, "Quantize predictions to 8 bits");
  c_va->add_option("--plot", va.plot, "SVG plot path");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    if (c_sim->parsed())
      run_simulate(sim);
    else if (c_fitc->parsed())
      run_fit_c(fit_c_in);
    else if (c_delta->parsed())
      run_gen_delta_cubes(delta_size);
    else if (c_sweep->parsed())
      run_sweep(sw);
    else if (c_est->parsed())
      run_estimate_knots(est);
    else if (c_fd->parsed())
      run_fit_display(fd_in, fd_mode);
    else if (c_mk->parsed())
      run_make_cube(mk);
    else if (c_gc->parsed())
      run_gen_cube(gc);
    else if (c_ch->parsed())
      run_characterize(ch);
    else if (c_va->parsed())
      run_validate(va);
  }
  catch (const CliFailure &f)
  {
    std::fprintf(stderr, "hdrp: %s\n", f.message.c_str());
    return f.code;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "hdrp: %s\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}
