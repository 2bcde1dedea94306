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


#include "hdrp/hdrp.h"

#include "hdrp/calibration.hpp"
#include "hdrp/colorspace.hpp"
#include "hdrp/cube_lut.hpp"
#include "hdrp/display.hpp"
#include "hdrp/error.hpp"
#include "hdrp/harness.hpp"
#include "hdrp/scene.hpp"

#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct hdrp_knots
{
  hdrp::KnotGrid grid;
};

struct hdrp_cube
{
  hdrp::CubeLUT lut;
  std::vector<std::string> warnings;
};

struct hdrp_tonemap
{
  hdrp::Tonemap tonemap;
};

struct hdrp_samples
{
  std::vector<hdrp::SceneSample> samples;
  std::vector<hdrp::RejectedRow> rejected;
};

struct hdrp_sweeps
{
  std::vector<hdrp::DeltaSweep> sweeps;
};

struct hdrp_delta_report
{
  std::vector<hdrp::DeltaKnotEstimate> entries;
};

struct hdrp_display
{
  hdrp::DisplayModel model;
};

struct hdrp_report
{
  hdrp::ValidationReport report;
};

struct hdrp_characterization
{
  std::vector<hdrp::CharacterizationReading> readings;
};

namespace
{

thread_local std::string g_last_error;

hdrp_status status_of(hdrp::ErrorKind kind)
{
  using hdrp::ErrorKind;
  switch (kind)
  {
  case ErrorKind::Domain:
    return HDRP_ERR_DOMAIN;
  case ErrorKind::Validation:
    return HDRP_ERR_VALIDATION;
  case ErrorKind::Contract:
    return HDRP_ERR_CONTRACT;
  case ErrorKind::Format:
    return HDRP_ERR_FORMAT;
  case ErrorKind::Unsupported:
    return HDRP_ERR_UNSUPPORTED;
  case ErrorKind::Io:
    return HDRP_ERR_IO;
  case ErrorKind::Fit:
    return HDRP_ERR_FIT;
  case ErrorKind::Convergence:
    return HDRP_ERR_CONVERGENCE;
  case ErrorKind::Singular:
    return HDRP_ERR_SINGULAR;
  case ErrorKind::InvalidArgument:
    return HDRP_ERR_INVALID_ARGUMENT;
  }
  return HDRP_ERR_INTERNAL;
}

template <typename F> hdrp_status guard(F &&body)
{
  try
  {
    body();
    g_last_error.clear();
    return HDRP_OK;
  }
  catch (const hdrp::Error &e)
  {
    g_last_error = e.what();
    return status_of(e.kind());
  }
  catch (const std::bad_alloc &)
  {
    g_last_error = "out of memory";
    return HDRP_ERR_OUT_OF_MEMORY;
  }
  catch (const std::exception &e)
  {
    g_last_error = e.what();
    return HDRP_ERR_INTERNAL;
  }
  catch (...)
  {
    g_last_error = "unknown error";
    return HDRP_ERR_INTERNAL;
  }
}

void require(const void *p, const char *what)
{
  if (p == nullptr)
    throw hdrp::InvalidArgument(std::string(what) + " must not be NULL");
}

// Distinguishes NULL arguments from other invalid input in the status code.
#define HDRP_REQUIRE(p)                                                                                                \
  do                                                                                                                   \
  {                                                                                                                    \
    if ((p) == nullptr)                                                                                                \
    {                                                                                                                  \
      g_last_error = #p " must not be NULL";                                                                           \
      return HDRP_ERR_NULL_ARGUMENT;                                                                                   \
    }                                                                                                                  \
  } while (0)

std::ifstream open_in(const char *path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw hdrp::IoError(std::string("cannot open '") + path + "' for reading");
  return in;
}

// Invariant violations found while loading a file are format problems.
template <typename F> auto load_file(const char *path, F &&parse)
{
  std::ifstream in = open_in(path);
  try
  {
    return parse(in);
  }
  catch (const hdrp::ValidationError &e)
  {
    throw hdrp::FormatError(std::string(path) + ": " + e.what());
  }
  catch (const hdrp::FormatError &e)
  {
    if (e.kind() == hdrp::ErrorKind::Unsupported)
      throw hdrp::UnsupportedError(std::string(path) + ": " + e.what());
    throw hdrp::FormatError(std::string(path) + ": " + e.what());
  }
}

template <typename F> void save_file(const char *path, F &&write)
{
  if (std::string(path) == "-")
  {
    write(std::cout);
    std::cout.flush();
    if (!std::cout)
      throw hdrp::IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw hdrp::IoError(std::string("cannot open '") + path + "' for writing");
  write(out);
  out.close();
  if (!out)
    throw hdrp::IoError(std::string("failed writing '") + path + "'");
}

hdrp::ColorTriplet triplet(const double x[3]) { return {x[0], x[1], x[2]}; }
hdrp::Vec3 vec(const double x[3]) { return {x[0], x[1], x[2]}; }

void store(const hdrp::ColorTriplet &c, double out[3])
{
  out[0] = c.r;
  out[1] = c.g;
  out[2] = c.b;
}

void store(const hdrp::Vec3 &v, double out[3])
{
  out[0] = v.x;
  out[1] = v.y;
  out[2] = v.z;
}

hdrp::SceneParams to_params(const hdrp_sample_record &r)
{
  hdrp::SceneParams p;
  p.kind = r.kind == HDRP_UNLIT ? hdrp::MaterialKind::Unlit : hdrp::MaterialKind::Lambertian;
  p.material = triplet(r.m);
  p.normal = vec(r.n);
  p.directional.color = triplet(r.d);
  p.directional.intensity = r.i_d;
  p.directional.direction = vec(r.l);
  p.ambient.color = triplet(r.a);
  p.ambient.intensity = r.i_a;
  p.exposure = r.e;
  return p;
}

hdrp_sample_record to_record(const hdrp::SceneSample &s)
{
  hdrp_sample_record r{};
  const hdrp::SceneParams &p = s.params;
  r.kind = p.kind == hdrp::MaterialKind::Unlit ? HDRP_UNLIT : HDRP_LAMBERTIAN;
  store(p.material, r.m);
  store(p.normal, r.n);
  store(p.directional.color, r.d);
  r.i_d = p.directional.intensity;
  store(p.directional.direction, r.l);
  store(p.ambient.color, r.a);
  r.i_a = p.ambient.intensity;
  r.e = p.exposure;
  store(s.v, r.v);
  return r;
}

} // namespace

extern "C" {

const char *hdrp_version(void) { return HDRP_VERSION_STRING; }

const char *hdrp_status_string(hdrp_status status)
{
  switch (status)
  {
  case HDRP_OK:
    return "ok";
  case HDRP_ERR_NULL_ARGUMENT:
    return "null argument";
  case HDRP_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case HDRP_ERR_DOMAIN:
    return "domain error";
  case HDRP_ERR_VALIDATION:
    return "validation error";
  case HDRP_ERR_CONTRACT:
    return "contract violation";
  case HDRP_ERR_FORMAT:
    return "format error";
  case HDRP_ERR_UNSUPPORTED:
    return "unsupported format";
  case HDRP_ERR_IO:
    return "i/o error";
  case HDRP_ERR_FIT:
    return "fit error";
  case HDRP_ERR_CONVERGENCE:
    return "convergence failure";
  case HDRP_ERR_SINGULAR:
    return "singular matrix";
  case HDRP_ERR_OUT_OF_MEMORY:
    return "out of memory";
  case HDRP_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *hdrp_last_error(void) { return g_last_error.c_str(); }

// ---- colorspace and scene ----

hdrp_status hdrp_srgb_decode(double x, double *out)
{
  HDRP_REQUIRE(out);
  return guard([&] { *out = hdrp::srgb_decode(x); });
}

hdrp_status hdrp_srgb_encode(double y, double *out)
{
  HDRP_REQUIRE(out);
  return guard([&] { *out = hdrp::srgb_encode(y); });
}

hdrp_status hdrp_quantize_8bit(double x, double *out)
{
  HDRP_REQUIRE(out);
  return guard([&] {
    if (!(x >= 0.0 && x <= 1.0))
      throw hdrp::DomainError("quantize_8bit input must lie in [0, 1]");
    *out = hdrp::quantize_8bit(hdrp::ColorTriplet::uniform(x)).r;
  });
}

hdrp_status hdrp_light_direction(double x_deg, double y_deg, double z_deg, double out[3])
{
  HDRP_REQUIRE(out);
  return guard([&] { store(hdrp::light_direction_from_rotation({x_deg, y_deg, z_deg}), out); });
}

hdrp_status hdrp_unprocessed(const hdrp_sample_record *scene, double c, double u[3])
{
  HDRP_REQUIRE(scene);
  HDRP_REQUIRE(u);
  return guard([&] { store(hdrp::unprocessed(to_params(*scene), c), u); });
}

hdrp_status hdrp_render(const hdrp_sample_record *scene, const hdrp_tonemap *tonemap, int quantize, double c,
                        double v[3])
{
  HDRP_REQUIRE(scene);
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(v);
  return guard([&] { store(hdrp::render(to_params(*scene), tonemap->tonemap, quantize != 0, c), v); });
}

// ---- knots ----

hdrp_status hdrp_knots_default(hdrp_knot_source source, hdrp_knots **out)
{
  HDRP_REQUIRE(out);
  return guard([&] {
    if (source != HDRP_KNOTS_DELTA && source != HDRP_KNOTS_OPTIMIZED)
      throw hdrp::InvalidArgument("unknown knot source");
    *out = new hdrp_knots{hdrp::KnotGrid::defaults(source == HDRP_KNOTS_DELTA ? hdrp::KnotSource::Delta
                                                                              : hdrp::KnotSource::Optimized)};
  });
}

hdrp_status hdrp_knots_create(const double *active, size_t count, hdrp_knots **out)
{
  HDRP_REQUIRE(active);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_knots{hdrp::KnotGrid(std::vector<double>(active, active + count))}; });
}

hdrp_status hdrp_knots_load(const char *path, hdrp_knots **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_knots{load_file(path, [](std::istream &in) { return hdrp::read_knots_csv(in); })}; });
}

hdrp_status hdrp_knots_save(const hdrp_knots *knots, const char *path)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::write_knots_csv(o, knots->grid); }); });
}

hdrp_status hdrp_knots_size(const hdrp_knots *knots, size_t *out)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(out);
  *out = knots->grid.size();
  return HDRP_OK;
}

hdrp_status hdrp_knots_get(const hdrp_knots *knots, size_t index, double *out)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(out);
  return guard([&] { *out = knots->grid.at(index); });
}

void hdrp_knots_free(hdrp_knots *knots) { delete knots; }

// ---- cubes ----

hdrp_status hdrp_cube_load(const char *path, hdrp_cube **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::CubeParseResult r = load_file(path, [](std::istream &in) { return hdrp::parse_cube(in); });
    *out = new hdrp_cube{std::move(r.lut), std::move(r.warnings)};
  });
}

hdrp_status hdrp_cube_save(const hdrp_cube *cube, const char *path)
{
  HDRP_REQUIRE(cube);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { o << hdrp::serialize_cube(cube->lut); }); });
}

hdrp_status hdrp_cube_delta(size_t m, size_t size, hdrp_cube **out)
{
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_cube{hdrp::make_delta_cube(m, size), {}}; });
}

hdrp_status hdrp_cube_power(const hdrp_knots *knots, double exponent, double scale, hdrp_cube **out)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_cube{hdrp::make_power_cube(knots->grid, exponent, scale), {}}; });
}

hdrp_status hdrp_cube_size(const hdrp_cube *cube, size_t *out)
{
  HDRP_REQUIRE(cube);
  HDRP_REQUIRE(out);
  *out = cube->lut.size();
  return HDRP_OK;
}

hdrp_status hdrp_cube_get(const hdrp_cube *cube, size_t i, size_t j, size_t k, double out[3])
{
  HDRP_REQUIRE(cube);
  HDRP_REQUIRE(out);
  return guard([&] {
    const size_t n = cube->lut.size();
    if (i >= n || j >= n || k >= n)
      throw hdrp::InvalidArgument("cube index out of range");
    store(cube->lut.at(i, j, k), out);
  });
}

size_t hdrp_cube_warning_count(const hdrp_cube *cube) { return cube ? cube->warnings.size() : 0; }

const char *hdrp_cube_warning(const hdrp_cube *cube, size_t index)
{
  if (!cube || index >= cube->warnings.size())
    return nullptr;
  return cube->warnings[index].c_str();
}

void hdrp_cube_free(hdrp_cube *cube) { delete cube; }

// ---- tonemaps ----

hdrp_status hdrp_tonemap_identity(hdrp_tonemap **out)
{
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_tonemap{hdrp::Tonemap::identity()}; });
}

hdrp_status hdrp_tonemap_external(const hdrp_knots *knots, const hdrp_cube *cube, hdrp_tonemap **out)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(cube);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_tonemap{hdrp::Tonemap::external(knots->grid, cube->lut)}; });
}

hdrp_status hdrp_tonemap_apply(const hdrp_tonemap *tonemap, const double u[3], double out[3])
{
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(u);
  HDRP_REQUIRE(out);
  return guard([&] { store(tonemap->tonemap.apply(triplet(u)), out); });
}

hdrp_status hdrp_post_process(const hdrp_tonemap *tonemap, const double u[3], double v[3])
{
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(u);
  HDRP_REQUIRE(v);
  return guard([&] { store(hdrp::post_process(triplet(u), tonemap->tonemap), v); });
}

void hdrp_tonemap_free(hdrp_tonemap *tonemap) { delete tonemap; }

// ---- samples ----

void hdrp_generate_config_default(hdrp_generate_config *config)
{
  if (!config)
    return;
  const hdrp::GenerateConfig d;
  config->count = d.count;
  config->seed = d.seed;
  config->kind = HDRP_LAMBERTIAN;
  config->quantize = 0;
  config->c = d.scale;
  config->ambient_color_lo = d.ranges.ambient_color.lo;
  config->ambient_color_hi = d.ranges.ambient_color.hi;
  config->directional_intensity_lo = d.ranges.directional_intensity.lo;
  config->directional_intensity_hi = d.ranges.directional_intensity.hi;
  config->ambient_intensity_lo = d.ranges.ambient_intensity.lo;
  config->ambient_intensity_hi = d.ranges.ambient_intensity.hi;
  config->exposures = nullptr;
  config->exposure_count = 0;
}

hdrp_status hdrp_samples_generate(const hdrp_generate_config *config, const hdrp_tonemap *tonemap,
                                  hdrp_samples **out)
{
  HDRP_REQUIRE(config);
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::GenerateConfig g;
    g.count = config->count;
    g.seed = config->seed;
    g.kind = config->kind == HDRP_UNLIT ? hdrp::MaterialKind::Unlit : hdrp::MaterialKind::Lambertian;
    g.quantize = config->quantize != 0;
    g.scale = config->c;
    g.ranges.ambient_color = {config->ambient_color_lo, config->ambient_color_hi};
    g.ranges.directional_intensity = {config->directional_intensity_lo, config->directional_intensity_hi};
    g.ranges.ambient_intensity = {config->ambient_intensity_lo, config->ambient_intensity_hi};
    if (config->exposures != nullptr)
      g.ranges.exposures.assign(config->exposures, config->exposures + config->exposure_count);
    *out = new hdrp_samples{hdrp::generate_samples(g, tonemap->tonemap), {}};
  });
}

hdrp_status hdrp_samples_load(const char *path, hdrp_samples **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::LoadedSamples r = load_file(path, [](std::istream &in) { return hdrp::load_samples(in); });
    *out = new hdrp_samples{std::move(r.samples), std::move(r.rejected)};
  });
}

hdrp_status hdrp_samples_save(const hdrp_samples *samples, const char *path)
{
  HDRP_REQUIRE(samples);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::save_samples(o, samples->samples); }); });
}

size_t hdrp_samples_count(const hdrp_samples *samples) { return samples ? samples->samples.size() : 0; }

hdrp_status hdrp_samples_get(const hdrp_samples *samples, size_t index, hdrp_sample_record *out)
{
  HDRP_REQUIRE(samples);
  HDRP_REQUIRE(out);
  return guard([&] {
    if (index >= samples->samples.size())
      throw hdrp::InvalidArgument("sample index out of range");
    *out = to_record(samples->samples[index]);
  });
}

size_t hdrp_samples_rejected_count(const hdrp_samples *samples) { return samples ? samples->rejected.size() : 0; }

hdrp_status hdrp_samples_rejected(const hdrp_samples *samples, size_t index, size_t *line, const char **reason)
{
  HDRP_REQUIRE(samples);
  return guard([&] {
    if (index >= samples->rejected.size())
      throw hdrp::InvalidArgument("rejected-row index out of range");
    if (line)
      *line = samples->rejected[index].line;
    if (reason)
      *reason = samples->rejected[index].reason.c_str();
  });
}

void hdrp_samples_free(hdrp_samples *samples) { delete samples; }

hdrp_status hdrp_estimate_scale(const hdrp_samples *samples, hdrp_scale_result *out)
{
  HDRP_REQUIRE(samples);
  HDRP_REQUIRE(out);
  return guard([&] {
    const hdrp::ScaleEstimate e = hdrp::estimate_scale_constant(samples->samples);
    *out = {e.c, e.slope, e.points_used, e.points_saturated, e.r_squared};
  });
}

// ---- knot estimation ----

hdrp_status hdrp_sweeps_synthesize(const hdrp_knots *knots, double lo, double hi, size_t points, hdrp_sweeps **out)
{
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_sweeps{hdrp::synthesize_delta_sweeps(knots->grid, {lo, hi, points})}; });
}

hdrp_status hdrp_sweeps_load(const char *path, hdrp_sweeps **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] { *out = new hdrp_sweeps{load_file(path, [](std::istream &in) { return hdrp::read_sweeps_csv(in); })}; });
}

hdrp_status hdrp_sweeps_save(const hdrp_sweeps *sweeps, const char *path)
{
  HDRP_REQUIRE(sweeps);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::write_sweeps_csv(o, sweeps->sweeps); }); });
}

size_t hdrp_sweeps_count(const hdrp_sweeps *sweeps) { return sweeps ? sweeps->sweeps.size() : 0; }

void hdrp_sweeps_free(hdrp_sweeps *sweeps) { delete sweeps; }

hdrp_status hdrp_estimate_knots_delta(const hdrp_sweeps *sweeps, hdrp_knots **knots, hdrp_delta_report **report)
{
  HDRP_REQUIRE(sweeps);
  HDRP_REQUIRE(knots);
  return guard([&] {
    hdrp::DeltaEstimateResult r = hdrp::estimate_knots_delta(sweeps->sweeps);
    auto *k = new hdrp_knots{std::move(r.knots)};
    if (report)
    {
      try
      {
        *report = new hdrp_delta_report{std::move(r.per_knot)};
      }
      catch (...)
      {
        delete k;
        throw;
      }
    }
    *knots = k;
  });
}

size_t hdrp_delta_report_count(const hdrp_delta_report *report) { return report ? report->entries.size() : 0; }

hdrp_status hdrp_delta_report_get(const hdrp_delta_report *report, size_t index, size_t *m, hdrp_delta_status *status,
                                  double *estimate, const char **note)
{
  HDRP_REQUIRE(report);
  return guard([&] {
    if (index >= report->entries.size())
      throw hdrp::InvalidArgument("report index out of range");
    const hdrp::DeltaKnotEstimate &e = report->entries[index];
    if (m)
      *m = e.m;
    if (status)
      *status = e.status == hdrp::DeltaStatus::Estimated    ? HDRP_DELTA_ESTIMATED
                : e.status == hdrp::DeltaStatus::NoResponse ? HDRP_DELTA_NO_RESPONSE
                                                            : HDRP_DELTA_ANOMALY;
    if (estimate)
      *estimate = e.estimate;
    if (note)
      *note = e.note.c_str();
  });
}

void hdrp_delta_report_free(hdrp_delta_report *report) { delete report; }

void hdrp_optimize_options_default(hdrp_optimize_options *options)
{
  if (!options)
    return;
  const hdrp::KnotOptimizeOptions d;
  *options = {d.scale,          d.filter_threshold, d.holdout_fraction, d.seed,
              d.penalty_weight, d.max_evaluations,  d.restarts,         d.initial_step};
}

hdrp_status hdrp_estimate_knots_optimize(const hdrp_samples *const *samples, const hdrp_cube *const *cubes,
                                         size_t count, const hdrp_knots *init, const hdrp_optimize_options *options,
                                         hdrp_knots **knots, hdrp_optimize_result *result)
{
  HDRP_REQUIRE(samples);
  HDRP_REQUIRE(cubes);
  HDRP_REQUIRE(init);
  HDRP_REQUIRE(knots);
  return guard([&] {
    std::vector<hdrp::TonemapDataset> sets;
    for (size_t i = 0; i < count; ++i)
    {
      require(samples[i], "samples[i]");
      require(cubes[i], "cubes[i]");
      sets.push_back({samples[i]->samples, cubes[i]->lut});
    }
    hdrp::KnotOptimizeOptions o;
    if (options)
      o = {options->c,           options->filter_threshold, options->holdout_fraction,
           options->seed,        options->penalty_weight,   options->max_evaluations,
           options->restarts,    options->initial_step};
    const hdrp::KnotOptimizeResult r = hdrp::estimate_knots_optimize(sets, init->grid, o);
    if (result)
      *result = {r.train_sse,       r.initial_train_sse, r.train_median_abs_255, r.holdout_median_abs_255,
                 r.train_samples,   r.holdout_samples,   r.excluded_samples,     r.evaluations,
                 r.converged ? 1 : 0};
    *knots = new hdrp_knots{r.knots};
  });
}

// ---- displays ----

hdrp_status hdrp_display_create_achromatic(double L0, double L1, double gamma, hdrp_display **out)
{
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::AchromaticDisplay d;
    d.L0 = L0;
    d.L1 = L1;
    d.activation.gamma = gamma;
    hdrp::validate(d);
    *out = new hdrp_display{d};
  });
}

hdrp_status hdrp_display_create_chromatic(const double primaries[9], const double background[3],
                                          const double gammas[3], hdrp_display **out)
{
  HDRP_REQUIRE(primaries);
  HDRP_REQUIRE(background);
  HDRP_REQUIRE(gammas);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::ChromaticDisplay d;
    for (size_t k = 0; k < 3; ++k)
    {
      d.primaries[k] = vec(primaries + 3 * k);
      d.activations[k].gamma = gammas[k];
    }
    d.background = vec(background);
    const hdrp::BackgroundWeights w = hdrp::solve_background_weights(d.primaries, d.background);
    d.weights = w.weights;
    d.weights_residual = w.residual;
    d.condition_number = w.condition;
    hdrp::validate(d);
    *out = new hdrp_display{d};
  });
}

hdrp_status hdrp_display_fit(const char *path, hdrp_display_kind kind, hdrp_display **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] {
    if (kind == HDRP_DISPLAY_ACHROMATIC)
    {
      const auto rows = load_file(path, [](std::istream &in) { return hdrp::read_luminance_csv(in); });
      *out = new hdrp_display{hdrp::fit_achromatic(rows)};
    }
    else if (kind == HDRP_DISPLAY_CHROMATIC)
    {
      const auto rows = load_file(path, [](std::istream &in) { return hdrp::read_xyz_csv(in); });
      *out = new hdrp_display{hdrp::fit_chromatic(rows)};
    }
    else
    {
      throw hdrp::InvalidArgument("unknown display kind");
    }
  });
}

hdrp_status hdrp_display_load(const char *path, hdrp_display **out)
{
  HDRP_REQUIRE(path);
  HDRP_REQUIRE(out);
  return guard([&] {
    *out = new hdrp_display{load_file(path, [](std::istream &in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      return hdrp::display_from_json(ss.str());
    })};
  });
}

hdrp_status hdrp_display_save(const hdrp_display *display, const char *path)
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { o << hdrp::display_to_json(display->model) << '\n'; }); });
}

hdrp_status hdrp_display_kind_of(const hdrp_display *display, hdrp_display_kind *out)
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(out);
  *out = std::holds_alternative<hdrp::AchromaticDisplay>(display->model) ? HDRP_DISPLAY_ACHROMATIC
                                                                          : HDRP_DISPLAY_CHROMATIC;
  return HDRP_OK;
}

hdrp_status hdrp_display_achromatic_params(const hdrp_display *display, double *L0, double *L1, double *gamma)
{
  HDRP_REQUIRE(display);
  return guard([&] {
    const auto *d = std::get_if<hdrp::AchromaticDisplay>(&display->model);
    if (!d)
      throw hdrp::InvalidArgument("display is not achromatic");
    if (L0)
      *L0 = d->L0;
    if (L1)
      *L1 = d->L1;
    if (gamma)
      *gamma = d->activation.gamma;
  });
}

hdrp_status hdrp_display_chromatic_params(const hdrp_display *display, double primaries[9], double background[3],
                                          double gammas[3], double weights[3])
{
  HDRP_REQUIRE(display);
  return guard([&] {
    const auto *d = std::get_if<hdrp::ChromaticDisplay>(&display->model);
    if (!d)
      throw hdrp::InvalidArgument("display is not chromatic");
    for (size_t k = 0; k < 3; ++k)
    {
      if (primaries)
        store(d->primaries[k], primaries + 3 * k);
      if (gammas)
        gammas[k] = d->activations[k].gamma;
      if (weights)
        weights[k] = d->weights[k];
    }
    if (background)
      store(d->background, background);
  });
}

hdrp_status hdrp_display_fit_summary(const hdrp_display *display, double *residual_rms, size_t *points)
{
  HDRP_REQUIRE(display);
  return guard([&] {
    const std::optional<hdrp::FitReport> &fit =
      std::visit([](const auto &d) -> const std::optional<hdrp::FitReport> & { return d.fit; }, display->model);
    if (!fit)
      throw hdrp::InvalidArgument("display was not fitted");
    if (residual_rms)
      *residual_rms = fit->residual_rms;
    if (points)
      *points = fit->point_count;
  });
}

hdrp_status hdrp_display_output(const hdrp_display *display, const double v[3], double xyz[3])
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(v);
  HDRP_REQUIRE(xyz);
  return guard([&] {
    if (const auto *a = std::get_if<hdrp::AchromaticDisplay>(&display->model))
    {
      if (!(v[0] == v[1] && v[1] == v[2]))
        throw hdrp::InvalidArgument("achromatic displays need a gray value");
      store(hdrp::Vec3{0.0, hdrp::achromatic_luminance(*a, v[0]), 0.0}, xyz);
    }
    else
    {
      store(hdrp::chromatic_xyz(std::get<hdrp::ChromaticDisplay>(display->model), triplet(v)), xyz);
    }
  });
}

void hdrp_display_free(hdrp_display *display) { delete display; }

// ---- gamma correction ----

hdrp_status hdrp_gamma_tonemap(const hdrp_display *display, double r, const double u[3], double out[3])
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(u);
  HDRP_REQUIRE(out);
  return guard([&] {
    const hdrp::GammaCorrectionSpec spec{display->model, r};
    hdrp::validate(spec);
    store(hdrp::gamma_tonemap_chromatic(spec, triplet(u)), out);
  });
}

hdrp_status hdrp_make_correction_cube(const hdrp_display *display, double r, const hdrp_knots *knots, int refine,
                                      hdrp_cube **out, hdrp_cube_info *info)
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(knots);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::CorrectionCube c = hdrp::build_correction_cube({display->model, r}, knots->grid, refine != 0);
    if (info)
      *info = {c.sse_point, c.sse_final, c.refined ? 1 : 0};
    *out = new hdrp_cube{std::move(c.lut), std::move(c.warnings)};
  });
}

// ---- validation ----

hdrp_status hdrp_validate_model(const hdrp_samples *samples, const hdrp_tonemap *tonemap, double c, int quantize,
                                double filter_threshold, hdrp_report **out)
{
  HDRP_REQUIRE(samples);
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(out);
  return guard([&] {
    hdrp::ValidationConfig cfg;
    cfg.scale = c;
    cfg.tonemap = tonemap->tonemap;
    cfg.quantize = quantize != 0;
    cfg.filter_threshold = filter_threshold;
    *out = new hdrp_report{hdrp::validate_model(samples->samples, cfg)};
  });
}

hdrp_status hdrp_report_summary_get(const hdrp_report *report, hdrp_report_summary *out)
{
  HDRP_REQUIRE(report);
  HDRP_REQUIRE(out);
  const hdrp::ValidationReport &r = report->report;
  *out = {r.rows.size(), r.median_abs_255, r.filtered_median_abs_255, r.max_abs_255, r.excluded};
  return HDRP_OK;
}

hdrp_status hdrp_report_save_csv(const hdrp_report *report, const char *path)
{
  HDRP_REQUIRE(report);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::write_report_csv(o, report->report); }); });
}

hdrp_status hdrp_report_save_svg(const hdrp_report *report, const char *path)
{
  HDRP_REQUIRE(report);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::write_report_svg(o, report->report); }); });
}

void hdrp_report_free(hdrp_report *report) { delete report; }

// ---- characterization ----

hdrp_status hdrp_characterize(const hdrp_display *display, const hdrp_tonemap *tonemap, const double *stimuli,
                              size_t count, hdrp_characterization **out)
{
  HDRP_REQUIRE(display);
  HDRP_REQUIRE(tonemap);
  HDRP_REQUIRE(out);
  if (count > 0)
    HDRP_REQUIRE(stimuli);
  return guard([&] {
    std::vector<hdrp::ColorTriplet> s;
    for (size_t i = 0; i < count; ++i)
      s.push_back(triplet(stimuli + 3 * i));
    *out = new hdrp_characterization{hdrp::simulate_characterization(display->model, tonemap->tonemap, s)};
  });
}

size_t hdrp_characterization_count(const hdrp_characterization *c) { return c ? c->readings.size() : 0; }

hdrp_status hdrp_characterization_get(const hdrp_characterization *c, size_t index, double u[3], double v[3],
                                      double xyz[3], double *luminance)
{
  HDRP_REQUIRE(c);
  return guard([&] {
    if (index >= c->readings.size())
      throw hdrp::InvalidArgument("reading index out of range");
    const hdrp::CharacterizationReading &r = c->readings[index];
    if (u)
      store(r.u, u);
    if (v)
      store(r.v, v);
    if (xyz)
      store(r.xyz, xyz);
    if (luminance)
      *luminance = r.luminance;
  });
}

hdrp_status hdrp_characterization_save(const hdrp_characterization *c, const char *path)
{
  HDRP_REQUIRE(c);
  HDRP_REQUIRE(path);
  return guard([&] { save_file(path, [&](std::ostream &o) { hdrp::write_characterization_csv(o, c->readings); }); });
}

void hdrp_characterization_free(hdrp_characterization *c) { delete c; }

hdrp_status hdrp_linearity_check(const double *x, const double *y, size_t count, double threshold, double slope,
                                 hdrp_linearity *out)
{
  HDRP_REQUIRE(x);
  HDRP_REQUIRE(y);
  HDRP_REQUIRE(out);
  return guard([&] {
    const std::vector<double> xs(x, x + count), ys(y, y + count);
    const hdrp::LinearityReport r = slope > 0.0 ? hdrp::linearity_against(xs, ys, slope, threshold)
                                                : hdrp::linearity_through_origin(xs, ys, threshold);
    *out = {r.slope, r.max_relative_error, r.worst_x, r.points};
  });
}

} // extern "C"
