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


/*
 * C interface to the HDRP rendering and calibration model.
 *
 * Objects are opaque handles created by hdrp_*_create/load/... and released
 * with the matching hdrp_*_free (which accept NULL). Every fallible function
 * returns an hdrp_status; on failure hdrp_last_error() describes the problem
 * for the calling thread. Output pointers are left untouched on failure.
 *
 * Paths passed to hdrp_*_save functions may be "-" for standard output.
 */

#ifndef HDRP_HDRP_H
#define HDRP_HDRP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HDRP_BUILDING_LIBRARY)
#define HDRP_API __declspec(dllexport)
#else
#define HDRP_API __declspec(dllimport)
#endif
#else
#define HDRP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdrp_status
{
  HDRP_OK = 0,
  HDRP_ERR_NULL_ARGUMENT = 1,
  HDRP_ERR_INVALID_ARGUMENT = 2,
  HDRP_ERR_DOMAIN = 3,        /* input outside a function's domain */
  HDRP_ERR_VALIDATION = 4,    /* object invariant violated */
  HDRP_ERR_CONTRACT = 5,      /* a tonemap produced values outside [0,1] */
  HDRP_ERR_FORMAT = 6,        /* malformed file */
  HDRP_ERR_UNSUPPORTED = 7,   /* well-formed but unsupported file (1D LUT) */
  HDRP_ERR_IO = 8,
  HDRP_ERR_FIT = 9,           /* insufficient or degenerate data */
  HDRP_ERR_CONVERGENCE = 10,
  HDRP_ERR_SINGULAR = 11,
  HDRP_ERR_OUT_OF_MEMORY = 12,
  HDRP_ERR_INTERNAL = 13
} hdrp_status;

typedef enum hdrp_material_kind
{
  HDRP_LAMBERTIAN = 0,
  HDRP_UNLIT = 1
} hdrp_material_kind;

typedef enum hdrp_knot_source
{
  HDRP_KNOTS_DELTA = 0,
  HDRP_KNOTS_OPTIMIZED = 1
} hdrp_knot_source;

typedef enum hdrp_display_kind
{
  HDRP_DISPLAY_ACHROMATIC = 0,
  HDRP_DISPLAY_CHROMATIC = 1
} hdrp_display_kind;

typedef enum hdrp_delta_status
{
  HDRP_DELTA_ESTIMATED = 0,
  HDRP_DELTA_NO_RESPONSE = 1,
  HDRP_DELTA_ANOMALY = 2
} hdrp_delta_status;

typedef struct hdrp_knots hdrp_knots;
typedef struct hdrp_cube hdrp_cube;
typedef struct hdrp_tonemap hdrp_tonemap;
typedef struct hdrp_samples hdrp_samples;
typedef struct hdrp_sweeps hdrp_sweeps;
typedef struct hdrp_delta_report hdrp_delta_report;
typedef struct hdrp_display hdrp_display;
typedef struct hdrp_report hdrp_report;
typedef struct hdrp_characterization hdrp_characterization;

/* ---- library ---------------------------------------------------------- */

HDRP_API const char *hdrp_version(void);
HDRP_API const char *hdrp_status_string(hdrp_status status);
/* Message of the last failure on this thread; "" if none. */
HDRP_API const char *hdrp_last_error(void);

/* ---- colorspace and scene --------------------------------------------- */

HDRP_API hdrp_status hdrp_srgb_decode(double x, double *out);
HDRP_API hdrp_status hdrp_srgb_encode(double y, double *out);
HDRP_API hdrp_status hdrp_quantize_8bit(double x, double *out);
/* Euler angles in degrees; z has no effect. */
HDRP_API hdrp_status hdrp_light_direction(double x_deg, double y_deg, double z_deg, double out[3]);

/* One scene observation; lighting fields are ignored for unlit materials. */
typedef struct hdrp_sample_record
{
  hdrp_material_kind kind;
  double m[3];
  double n[3];
  double d[3];
  double i_d;
  double l[3];
  double a[3];
  double i_a;
  double e;
  double v[3];
} hdrp_sample_record;

/* Unprocessed value u of a scene with scale constant c. */
HDRP_API hdrp_status hdrp_unprocessed(const hdrp_sample_record *scene, double c, double u[3]);
/* v = s^-1(f(u)), quantized to 8 bits when quantize != 0. */
HDRP_API hdrp_status hdrp_render(const hdrp_sample_record *scene, const hdrp_tonemap *tonemap, int quantize, double c,
                                 double v[3]);

/* ---- knots ------------------------------------------------------------ */

HDRP_API hdrp_status hdrp_knots_default(hdrp_knot_source source, hdrp_knots **out);
/* active holds u*_3..u*_n. */
HDRP_API hdrp_status hdrp_knots_create(const double *active, size_t count, hdrp_knots **out);
HDRP_API hdrp_status hdrp_knots_load(const char *path, hdrp_knots **out);
HDRP_API hdrp_status hdrp_knots_save(const hdrp_knots *knots, const char *path);
/* Grid size n (active count + 2). */
HDRP_API hdrp_status hdrp_knots_size(const hdrp_knots *knots, size_t *out);
/* u*_index for 3 <= index <= n. */
HDRP_API hdrp_status hdrp_knots_get(const hdrp_knots *knots, size_t index, double *out);
HDRP_API void hdrp_knots_free(hdrp_knots *knots);

/* ---- cube files ------------------------------------------------------- */

HDRP_API hdrp_status hdrp_cube_load(const char *path, hdrp_cube **out);
HDRP_API hdrp_status hdrp_cube_save(const hdrp_cube *cube, const char *path);
HDRP_API hdrp_status hdrp_cube_delta(size_t m, size_t size, hdrp_cube **out);
/* Separable cube min((u / scale)^exponent, 1) over the knots. */
HDRP_API hdrp_status hdrp_cube_power(const hdrp_knots *knots, double exponent, double scale, hdrp_cube **out);
HDRP_API hdrp_status hdrp_cube_size(const hdrp_cube *cube, size_t *out);
/* 0-based indices, red fastest. */
HDRP_API hdrp_status hdrp_cube_get(const hdrp_cube *cube, size_t i, size_t j, size_t k, double out[3]);
/* Warnings from loading or construction. The string lives as long as the cube. */
HDRP_API size_t hdrp_cube_warning_count(const hdrp_cube *cube);
HDRP_API const char *hdrp_cube_warning(const hdrp_cube *cube, size_t index);
HDRP_API void hdrp_cube_free(hdrp_cube *cube);

/* ---- tonemaps --------------------------------------------------------- */

HDRP_API hdrp_status hdrp_tonemap_identity(hdrp_tonemap **out);
/* Copies knots and cube; sizes must match. */
HDRP_API hdrp_status hdrp_tonemap_external(const hdrp_knots *knots, const hdrp_cube *cube, hdrp_tonemap **out);
HDRP_API hdrp_status hdrp_tonemap_apply(const hdrp_tonemap *tonemap, const double u[3], double out[3]);
HDRP_API hdrp_status hdrp_post_process(const hdrp_tonemap *tonemap, const double u[3], double v[3]);
HDRP_API void hdrp_tonemap_free(hdrp_tonemap *tonemap);

/* ---- samples ---------------------------------------------------------- */

typedef struct hdrp_generate_config
{
  size_t count;
  uint64_t seed;
  hdrp_material_kind kind;
  int quantize;
  double c;
  double ambient_color_lo, ambient_color_hi;
  double directional_intensity_lo, directional_intensity_hi;
  double ambient_intensity_lo, ambient_intensity_hi;
  const double *exposures; /* NULL means {0} */
  size_t exposure_count;
} hdrp_generate_config;

HDRP_API void hdrp_generate_config_default(hdrp_generate_config *config);
HDRP_API hdrp_status hdrp_samples_generate(const hdrp_generate_config *config, const hdrp_tonemap *tonemap,
                                           hdrp_samples **out);
/* Rows breaking an invariant are skipped and listed via hdrp_samples_rejected. */
HDRP_API hdrp_status hdrp_samples_load(const char *path, hdrp_samples **out);
HDRP_API hdrp_status hdrp_samples_save(const hdrp_samples *samples, const char *path);
HDRP_API size_t hdrp_samples_count(const hdrp_samples *samples);
HDRP_API hdrp_status hdrp_samples_get(const hdrp_samples *samples, size_t index, hdrp_sample_record *out);
HDRP_API size_t hdrp_samples_rejected_count(const hdrp_samples *samples);
HDRP_API hdrp_status hdrp_samples_rejected(const hdrp_samples *samples, size_t index, size_t *line,
                                           const char **reason);
HDRP_API void hdrp_samples_free(hdrp_samples *samples);

typedef struct hdrp_scale_result
{
  double c;
  double slope;
  size_t points_used;
  size_t points_saturated;
  double r_squared;
} hdrp_scale_result;

HDRP_API hdrp_status hdrp_estimate_scale(const hdrp_samples *samples, hdrp_scale_result *out);

/* ---- knot estimation -------------------------------------------------- */

/* Sweeps through every delta cube over the knots, log-spaced on [lo, hi]. */
HDRP_API hdrp_status hdrp_sweeps_synthesize(const hdrp_knots *knots, double lo, double hi, size_t points,
                                            hdrp_sweeps **out);
HDRP_API hdrp_status hdrp_sweeps_load(const char *path, hdrp_sweeps **out);
HDRP_API hdrp_status hdrp_sweeps_save(const hdrp_sweeps *sweeps, const char *path);
HDRP_API size_t hdrp_sweeps_count(const hdrp_sweeps *sweeps);
HDRP_API void hdrp_sweeps_free(hdrp_sweeps *sweeps);

HDRP_API hdrp_status hdrp_estimate_knots_delta(const hdrp_sweeps *sweeps, hdrp_knots **knots,
                                               hdrp_delta_report **report);
HDRP_API size_t hdrp_delta_report_count(const hdrp_delta_report *report);
HDRP_API hdrp_status hdrp_delta_report_get(const hdrp_delta_report *report, size_t index, size_t *m,
                                           hdrp_delta_status *status, double *estimate, const char **note);
HDRP_API void hdrp_delta_report_free(hdrp_delta_report *report);

typedef struct hdrp_optimize_options
{
  double c;
  double filter_threshold;
  double holdout_fraction;
  uint64_t seed;
  double penalty_weight;
  size_t max_evaluations;
  size_t restarts;
  double initial_step;
} hdrp_optimize_options;

typedef struct hdrp_optimize_result
{
  double train_sse;
  double initial_train_sse;
  double train_median_abs_255;
  double holdout_median_abs_255;
  size_t train_samples;
  size_t holdout_samples;
  size_t excluded_samples;
  size_t evaluations;
  int converged;
} hdrp_optimize_result;

HDRP_API void hdrp_optimize_options_default(hdrp_optimize_options *options);
/* samples[i] were rendered under cubes[i]. */
HDRP_API hdrp_status hdrp_estimate_knots_optimize(const hdrp_samples *const *samples, const hdrp_cube *const *cubes,
                                                  size_t count, const hdrp_knots *init,
                                                  const hdrp_optimize_options *options, hdrp_knots **knots,
                                                  hdrp_optimize_result *result);

/* ---- displays --------------------------------------------------------- */

HDRP_API hdrp_status hdrp_display_create_achromatic(double L0, double L1, double gamma, hdrp_display **out);
/* primaries: r, g, b XYZ triplets (9 values). */
HDRP_API hdrp_status hdrp_display_create_chromatic(const double primaries[9], const double background[3],
                                                   const double gammas[3], hdrp_display **out);
/* CSV `v,L` for achromatic, `v_r,v_g,v_b,X,Y,Z` for chromatic fits. */
HDRP_API hdrp_status hdrp_display_fit(const char *path, hdrp_display_kind kind, hdrp_display **out);
HDRP_API hdrp_status hdrp_display_load(const char *path, hdrp_display **out);
HDRP_API hdrp_status hdrp_display_save(const hdrp_display *display, const char *path);
HDRP_API hdrp_status hdrp_display_kind_of(const hdrp_display *display, hdrp_display_kind *out);
HDRP_API hdrp_status hdrp_display_achromatic_params(const hdrp_display *display, double *L0, double *L1,
                                                    double *gamma);
HDRP_API hdrp_status hdrp_display_chromatic_params(const hdrp_display *display, double primaries[9],
                                                   double background[3], double gammas[3], double weights[3]);
/* Fit residual RMS and averaged point count; HDRP_ERR_INVALID_ARGUMENT if not fitted. */
HDRP_API hdrp_status hdrp_display_fit_summary(const hdrp_display *display, double *residual_rms, size_t *points);
/* XYZ for chromatic displays; (0, L, 0) for achromatic ones given a gray v. */
HDRP_API hdrp_status hdrp_display_output(const hdrp_display *display, const double v[3], double xyz[3]);
HDRP_API void hdrp_display_free(hdrp_display *display);

/* ---- gamma correction ------------------------------------------------- */

HDRP_API hdrp_status hdrp_gamma_tonemap(const hdrp_display *display, double r, const double u[3], double out[3]);

typedef struct hdrp_cube_info
{
  double sse_point;
  double sse_final;
  int refined;
} hdrp_cube_info;

HDRP_API hdrp_status hdrp_make_correction_cube(const hdrp_display *display, double r, const hdrp_knots *knots,
                                               int refine, hdrp_cube **out, hdrp_cube_info *info);

/* ---- validation ------------------------------------------------------- */

typedef struct hdrp_report_summary
{
  size_t samples;
  double median_abs_255;
  double filtered_median_abs_255;
  double max_abs_255;
  size_t excluded;
} hdrp_report_summary;

HDRP_API hdrp_status hdrp_validate_model(const hdrp_samples *samples, const hdrp_tonemap *tonemap, double c,
                                         int quantize, double filter_threshold, hdrp_report **out);
HDRP_API hdrp_status hdrp_report_summary_get(const hdrp_report *report, hdrp_report_summary *out);
HDRP_API hdrp_status hdrp_report_save_csv(const hdrp_report *report, const char *path);
HDRP_API hdrp_status hdrp_report_save_svg(const hdrp_report *report, const char *path);
HDRP_API void hdrp_report_free(hdrp_report *report);

/* ---- characterization ------------------------------------------------- */

/* stimuli: count unprocessed triplets (3 * count values). */
HDRP_API hdrp_status hdrp_characterize(const hdrp_display *display, const hdrp_tonemap *tonemap,
                                       const double *stimuli, size_t count, hdrp_characterization **out);
HDRP_API size_t hdrp_characterization_count(const hdrp_characterization *c);
HDRP_API hdrp_status hdrp_characterization_get(const hdrp_characterization *c, size_t index, double u[3],
                                               double v[3], double xyz[3], double *luminance);
HDRP_API hdrp_status hdrp_characterization_save(const hdrp_characterization *c, const char *path);
HDRP_API void hdrp_characterization_free(hdrp_characterization *c);

typedef struct hdrp_linearity
{
  double slope;
  double max_relative_error;
  double worst_x;
  size_t points;
} hdrp_linearity;

/* Fits y = b x through the origin over x >= threshold, or measures deviation
 * from the given slope when slope > 0. */
HDRP_API hdrp_status hdrp_linearity_check(const double *x, const double *y, size_t count, double threshold,
                                          double slope, hdrp_linearity *out);

#ifdef __cplusplus
}
#endif

#endif /* HDRP_HDRP_H */
