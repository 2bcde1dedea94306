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

/* Exercises the C API from plain C. argv[1] is a writable scratch directory. */

#include "hdrp/hdrp.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                                                                    \
  do                                                                                                                   \
  {                                                                                                                    \
    if (!(cond))                                                                                                       \
    {                                                                                                                  \
      fprintf(stderr, "%s:%d: CHECK(%s) failed (last error: %s)\n", __FILE__, __LINE__, #cond, hdrp_last_error());   \
      ++failures;                                                                                                      \
    }                                                                                                                  \
  } while (0)

#define CHECK_OK(expr) CHECK((expr) == HDRP_OK)

static void path_in(char *buf, size_t n, const char *dir, const char *name) { snprintf(buf, n, "%s/%s", dir, name); }

static void test_colorspace(void)
{
  double y = 0.0, x = 0.0;
  CHECK_OK(hdrp_srgb_decode(0.5, &y));
  CHECK(fabs(y - 0.21404114048223255) < 1e-12);
  CHECK_OK(hdrp_srgb_encode(y, &x));
  CHECK(fabs(x - 0.5) < 1e-12);
  CHECK(hdrp_srgb_decode(1.5, &y) == HDRP_ERR_DOMAIN);
  CHECK(strlen(hdrp_last_error()) > 0);
  CHECK(hdrp_srgb_decode(0.5, NULL) == HDRP_ERR_NULL_ARGUMENT);
  CHECK_OK(hdrp_quantize_8bit(0.5, &x));
  CHECK(x == 128.0 / 255.0);

  double l[3];
  CHECK_OK(hdrp_light_direction(90.0, 0.0, 33.0, l));
  CHECK(fabs(l[0]) < 1e-12 && fabs(l[1] - 1.0) < 1e-12 && fabs(l[2]) < 1e-12);
  CHECK(strcmp(hdrp_status_string(HDRP_ERR_FORMAT), "") != 0);
  CHECK(strlen(hdrp_version()) > 0);
}

static void test_render(void)
{
  hdrp_sample_record s;
  memset(&s, 0, sizeof s);
  s.kind = HDRP_LAMBERTIAN;
  s.m[0] = s.m[1] = s.m[2] = 1.0;
  s.d[0] = s.d[1] = s.d[2] = 1.0;
  s.n[2] = -1.0;
  s.l[2] = -1.0;
  s.i_d = 3.14159265358979323846;
  double u[3];
  CHECK_OK(hdrp_unprocessed(&s, 0.822, u));
  CHECK(fabs(u[0] - 0.822) < 1e-15 && fabs(u[2] - 0.822) < 1e-15);

  s.n[2] = -0.5; /* not a unit vector */
  CHECK(hdrp_unprocessed(&s, 0.822, u) == HDRP_ERR_VALIDATION);

  hdrp_tonemap *id = NULL;
  CHECK_OK(hdrp_tonemap_identity(&id));
  hdrp_sample_record unlit;
  memset(&unlit, 0, sizeof unlit);
  unlit.kind = HDRP_UNLIT;
  unlit.m[0] = 0.25;
  unlit.m[1] = 0.5;
  unlit.m[2] = 0.75;
  double v[3];
  CHECK_OK(hdrp_render(&unlit, id, 0, 0.822, v));
  CHECK(fabs(v[0] - 0.25) < 1e-12 && fabs(v[1] - 0.5) < 1e-12 && fabs(v[2] - 0.75) < 1e-12);
  hdrp_tonemap_free(id);
}

static void test_cubes(const char *dir)
{
  char path[1024];
  hdrp_knots *knots = NULL;
  CHECK_OK(hdrp_knots_default(HDRP_KNOTS_DELTA, &knots));
  size_t n = 0;
  double k16 = 0.0;
  CHECK_OK(hdrp_knots_size(knots, &n));
  CHECK(n == 32);
  CHECK_OK(hdrp_knots_get(knots, 16, &k16));
  CHECK(k16 == 0.4406);
  CHECK(hdrp_knots_get(knots, 2, &k16) == HDRP_ERR_INVALID_ARGUMENT);

  const double bad[] = {0.2, 0.1};
  hdrp_knots *bk = NULL;
  CHECK(hdrp_knots_create(bad, 2, &bk) == HDRP_ERR_VALIDATION);
  CHECK(bk == NULL);

  hdrp_cube *delta = NULL;
  CHECK_OK(hdrp_cube_delta(16, 32, &delta));
  path_in(path, sizeof path, dir, "capi_delta_16.cube");
  CHECK_OK(hdrp_cube_save(delta, path));
  hdrp_cube *loaded = NULL;
  CHECK_OK(hdrp_cube_load(path, &loaded));
  double t[3];
  CHECK_OK(hdrp_cube_get(loaded, 15, 0, 0, t));
  CHECK(t[0] == 1.0 && t[1] == 0.0);
  CHECK(hdrp_cube_warning_count(loaded) == 0);

  hdrp_tonemap *f = NULL;
  CHECK_OK(hdrp_tonemap_external(knots, loaded, &f));
  const double peak[3] = {0.4406, 0.4406, 0.4406};
  CHECK_OK(hdrp_tonemap_apply(f, peak, t));
  CHECK(t[0] == 1.0 && t[1] == 1.0 && t[2] == 1.0);
  hdrp_tonemap_free(f);

  FILE *fp;
  path_in(path, sizeof path, dir, "capi_truncated.cube");
  fp = fopen(path, "w");
  fputs("LUT_3D_SIZE 2\n0 0 0\n1 0 0\n", fp);
  fclose(fp);
  hdrp_cube *broken = NULL;
  CHECK(hdrp_cube_load(path, &broken) == HDRP_ERR_FORMAT);
  CHECK(strstr(hdrp_last_error(), "truncated") != NULL);

  path_in(path, sizeof path, dir, "capi_1d.cube");
  fp = fopen(path, "w");
  fputs("LUT_1D_SIZE 2\n0 0 0\n1 1 1\n", fp);
  fclose(fp);
  CHECK(hdrp_cube_load(path, &broken) == HDRP_ERR_UNSUPPORTED);
  CHECK(hdrp_cube_load("/nonexistent/dir/x.cube", &broken) == HDRP_ERR_IO);

  hdrp_cube_free(delta);
  hdrp_cube_free(loaded);
  hdrp_knots_free(knots);
  hdrp_cube_free(NULL);
}

static void test_samples_and_scale(const char *dir)
{
  char path[1024];
  hdrp_tonemap *id = NULL;
  CHECK_OK(hdrp_tonemap_identity(&id));
  hdrp_generate_config cfg;
  hdrp_generate_config_default(&cfg);
  cfg.count = 2000;
  cfg.seed = 3;
  hdrp_samples *s = NULL;
  CHECK_OK(hdrp_samples_generate(&cfg, id, &s));
  CHECK(hdrp_samples_count(s) == 2000);

  hdrp_scale_result sr;
  CHECK_OK(hdrp_estimate_scale(s, &sr));
  CHECK(fabs(sr.c - 0.822) < 1e-9);

  path_in(path, sizeof path, dir, "capi_samples.csv");
  CHECK_OK(hdrp_samples_save(s, path));
  hdrp_samples *back = NULL;
  CHECK_OK(hdrp_samples_load(path, &back));
  CHECK(hdrp_samples_count(back) == 2000);
  CHECK(hdrp_samples_rejected_count(back) == 0);
  hdrp_sample_record a, b;
  CHECK_OK(hdrp_samples_get(s, 17, &a));
  CHECK_OK(hdrp_samples_get(back, 17, &b));
  CHECK(fabs(a.v[1] - b.v[1]) < 1e-12 && fabs(a.n[0] - b.n[0]) < 1e-12);

  hdrp_report *rep = NULL;
  CHECK_OK(hdrp_validate_model(back, id, 0.822, 0, 0.2, &rep));
  hdrp_report_summary sum;
  CHECK_OK(hdrp_report_summary_get(rep, &sum));
  CHECK(sum.samples == 2000 && sum.median_abs_255 < 1e-9 * 255);
  hdrp_report_free(rep);

  hdrp_generate_config few = cfg;
  few.count = 10;
  hdrp_samples *small = NULL;
  CHECK_OK(hdrp_samples_generate(&few, id, &small));
  CHECK(hdrp_estimate_scale(small, &sr) == HDRP_ERR_FIT);

  hdrp_samples_free(s);
  hdrp_samples_free(back);
  hdrp_samples_free(small);
  hdrp_tonemap_free(id);
}

static void test_knot_estimation(void)
{
  hdrp_knots *truth = NULL, *est = NULL;
  CHECK_OK(hdrp_knots_default(HDRP_KNOTS_DELTA, &truth));
  hdrp_sweeps *sw = NULL;
  CHECK_OK(hdrp_sweeps_synthesize(truth, 1e-5, 100.0, 2000, &sw));
  CHECK(hdrp_sweeps_count(sw) == 32);
  hdrp_delta_report *rep = NULL;
  CHECK_OK(hdrp_estimate_knots_delta(sw, &est, &rep));
  for (size_t i = 3; i <= 32; ++i)
  {
    double a = 0, b = 0;
    hdrp_knots_get(truth, i, &a);
    hdrp_knots_get(est, i, &b);
    CHECK(fabs(b / a - 1.0) < 0.005);
  }
  size_t m;
  hdrp_delta_status st;
  double e;
  const char *note;
  CHECK(hdrp_delta_report_count(rep) == 32);
  CHECK_OK(hdrp_delta_report_get(rep, 0, &m, &st, &e, &note));
  CHECK(m == 1 && st == HDRP_DELTA_NO_RESPONSE);

  /* Optimization from the true knots is a fixed point. */
  hdrp_cube *sq = NULL;
  double top = 0;
  hdrp_knots_get(truth, 32, &top);
  CHECK_OK(hdrp_cube_power(truth, 2.0, top, &sq));
  hdrp_tonemap *f = NULL;
  CHECK_OK(hdrp_tonemap_external(truth, sq, &f));
  hdrp_generate_config cfg;
  hdrp_generate_config_default(&cfg);
  cfg.count = 300;
  hdrp_samples *s = NULL;
  CHECK_OK(hdrp_samples_generate(&cfg, f, &s));
  hdrp_optimize_options opt;
  hdrp_optimize_options_default(&opt);
  opt.max_evaluations = 500;
  opt.restarts = 0;
  hdrp_knots *fit = NULL;
  hdrp_optimize_result res;
  const hdrp_samples *sets[1] = {s};
  const hdrp_cube *cubes[1] = {sq};
  CHECK_OK(hdrp_estimate_knots_optimize(sets, cubes, 1, truth, &opt, &fit, &res));
  CHECK(res.train_sse < 1e-24);

  hdrp_knots_free(fit);
  hdrp_samples_free(s);
  hdrp_tonemap_free(f);
  hdrp_cube_free(sq);
  hdrp_delta_report_free(rep);
  hdrp_sweeps_free(sw);
  hdrp_knots_free(est);
  hdrp_knots_free(truth);
}

static void test_display(const char *dir)
{
  char path[1024];
  path_in(path, sizeof path, dir, "capi_luminance.csv");
  FILE *fp = fopen(path, "w");
  fputs("v,L\n", fp);
  for (int i = 0; i <= 10; ++i)
    fprintf(fp, "%.17g,%.17g\n", i / 10.0, 2.0 + 98.0 * pow(i / 10.0, 2.2));
  fclose(fp);
  hdrp_display *d = NULL;
  CHECK_OK(hdrp_display_fit(path, HDRP_DISPLAY_ACHROMATIC, &d));
  double L0, L1, g;
  CHECK_OK(hdrp_display_achromatic_params(d, &L0, &L1, &g));
  CHECK(fabs(L0 - 2.0) < 1e-6 && fabs(L1 - 98.0) < 1e-5 && fabs(g - 2.2) < 1e-6);
  hdrp_display_kind kind;
  CHECK_OK(hdrp_display_kind_of(d, &kind));
  CHECK(kind == HDRP_DISPLAY_ACHROMATIC);

  path_in(path, sizeof path, dir, "capi_display.json");
  CHECK_OK(hdrp_display_save(d, path));
  hdrp_display *d2 = NULL;
  CHECK_OK(hdrp_display_load(path, &d2));

  /* Exact tonemap: L proportional to u above the cutoff. */
  const double u[3] = {0.5, 0.5, 0.5};
  double fu[3], v[3], out[3];
  CHECK_OK(hdrp_gamma_tonemap(d2, 1.0, u, fu));
  CHECK_OK(hdrp_srgb_encode(fu[0], &v[0]));
  v[1] = v[2] = v[0];
  CHECK_OK(hdrp_display_output(d2, v, out));
  CHECK(fabs(out[1] / 50.0 - 1.0) < 1e-6);

  hdrp_knots *knots = NULL;
  CHECK_OK(hdrp_knots_default(HDRP_KNOTS_DELTA, &knots));
  hdrp_cube *cc = NULL;
  hdrp_cube_info info;
  CHECK_OK(hdrp_make_correction_cube(d2, 1.0, knots, 1, &cc, &info));
  CHECK(info.sse_final <= info.sse_point);

  /* Two rows are not enough to fit. */
  path_in(path, sizeof path, dir, "capi_two_rows.csv");
  fp = fopen(path, "w");
  fputs("v,L\n0,2\n1,100\n", fp);
  fclose(fp);
  hdrp_display *d3 = NULL;
  CHECK(hdrp_display_fit(path, HDRP_DISPLAY_ACHROMATIC, &d3) == HDRP_ERR_FIT);
  CHECK(strstr(hdrp_last_error(), "insufficient data") != NULL);

  hdrp_tonemap *f = NULL;
  CHECK_OK(hdrp_tonemap_external(knots, cc, &f));
  double stimuli[3 * 11];
  for (int i = 0; i <= 10; ++i)
    stimuli[3 * i] = stimuli[3 * i + 1] = stimuli[3 * i + 2] = i / 10.0;
  hdrp_characterization *ch = NULL;
  CHECK_OK(hdrp_characterize(d2, f, stimuli, 11, &ch));
  CHECK(hdrp_characterization_count(ch) == 11);
  double cu[3], cv[3], cx[3], lum;
  CHECK_OK(hdrp_characterization_get(ch, 0, cu, cv, cx, &lum));
  CHECK(fabs(lum - 2.0) < 1e-9);

  const double xs[3] = {1, 2, 3}, ys[3] = {2, 4, 6};
  hdrp_linearity lin;
  CHECK_OK(hdrp_linearity_check(xs, ys, 3, 0.0, 0.0, &lin));
  CHECK(fabs(lin.slope - 2.0) < 1e-15 && lin.max_relative_error < 1e-15);

  hdrp_characterization_free(ch);
  hdrp_tonemap_free(f);
  hdrp_cube_free(cc);
  hdrp_knots_free(knots);
  hdrp_display_free(d);
  hdrp_display_free(d2);
}

int main(int argc, char **argv)
{
  const char *dir = argc > 1 ? argv[1] : ".";
  test_colorspace();
  test_render();
  test_cubes(dir);
  test_samples_and_scale(dir);
  test_knot_estimation();
  test_display(dir);
  if (failures)
  {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi_test: all checks passed\n");
  return 0;
}
