/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "rbbr/rbbr.h"

static int failures = 0;

#define EXPECT(cond)                                            \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                               \
    }                                                           \
  } while (0)

static const char* kTiny =
    "{\"name\": \"tiny\", \"game\": {\"kind\": \"matrix\", \"matrix\": [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]},\n"
    " \"regularizer\": {\"kind\": \"shannon\"}, \"epsilon\": 1, \"starts\": 3, \"sweep\": [1, 0.5]}";

static void test_pure_functions(void) {
  const double u[2] = {-1.0, 0.0};
  double y[2];
  EXPECT(rbbr_logit(1.0, u, 2, y) == RBBR_OK);
  EXPECT(fabs(y[0] - 1.0 / (1.0 + exp(1.0))) < 1e-15);
  double z[2];
  EXPECT(rbbr_conjugate_argmax(RBBR_SHANNON, 0.0, 1.0, u, 2, z) == RBBR_OK);
  EXPECT(fabs(z[0] - y[0]) < 1e-12);
  EXPECT(rbbr_conjugate_argmax(RBBR_TSALLIS, 0.5, 0.2, u, 2, z) == RBBR_OK);
  EXPECT(fabs(z[0] + z[1] - 1.0) < 1e-12);
  EXPECT(rbbr_conjugate_argmax(RBBR_BURG, 0.0, -1.0, u, 2, z) == RBBR_CONFIG_ERROR);
  EXPECT(strlen(rbbr_last_error()) > 0);
  EXPECT(rbbr_logit(1.0, NULL, 2, y) == RBBR_INVALID_ARGUMENT);
  EXPECT(strlen(rbbr_version()) > 0);
}

static void test_scenario(void) {
  rbbr_scenario* sc = NULL;
  EXPECT(rbbr_scenario_load_string("{\"name\": 1}", "inline", &sc) == RBBR_CONFIG_ERROR);
  EXPECT(sc == NULL);
  EXPECT(strstr(rbbr_last_error(), "inline:1:") != NULL);
  EXPECT(rbbr_scenario_load_file("/nonexistent.json", &sc) == RBBR_CONFIG_ERROR);
  EXPECT(rbbr_scenario_load_string(NULL, "x", &sc) == RBBR_INVALID_ARGUMENT);

  EXPECT(rbbr_scenario_load_string(kTiny, "inline", &sc) == RBBR_OK);
  if (!sc) return;
  EXPECT(rbbr_scenario_types(sc) == 1);
  EXPECT(rbbr_scenario_strategies(sc) == 3);
  char digest[17];
  strncpy(digest, rbbr_scenario_digest(sc), 16);
  digest[16] = '\0';
  EXPECT(strlen(digest) == 16);
  EXPECT(rbbr_scenario_set_seed(sc, 99) == RBBR_OK);
  EXPECT(strcmp(digest, rbbr_scenario_digest(sc)) != 0);

  rbbr_result* r = NULL;
  EXPECT(rbbr_simulate(sc, "vertex:0", &r) == RBBR_OK);
  if (r) {
    EXPECT(rbbr_result_exit_code(r) == 0);
    EXPECT(rbbr_result_file_count(r) == 1);
    EXPECT(strcmp(rbbr_result_file_name(r, 0), "trajectory.csv") == 0);
    EXPECT(strncmp(rbbr_result_file_content(r, 0), "# rbbr simulate scenario=tiny", 29) == 0);
    EXPECT(rbbr_result_file_name(r, 5) == NULL);
    rbbr_result_free(r);
    r = NULL;
  }
  EXPECT(rbbr_simulate(sc, "vertex:9", &r) == RBBR_CONFIG_ERROR);
  EXPECT(r == NULL);

  EXPECT(rbbr_equilibrium(sc, 0, &r) == RBBR_OK);
  if (r) {
    EXPECT(rbbr_result_file_count(r) == 2);
    EXPECT(strstr(rbbr_result_summary(r), "1 distinct") != NULL);
    rbbr_result_free(r);
    r = NULL;
  }

  EXPECT(rbbr_check(sc, "regularizers", &r) == RBBR_OK);
  if (r) {
    EXPECT(rbbr_result_exit_code(r) == 0);
    rbbr_result_free(r);
    r = NULL;
  }
  EXPECT(rbbr_check(sc, "nonsense", &r) == RBBR_CONFIG_ERROR);

  const double eps[3] = {2.0, 1.0, 0.5};
  EXPECT(rbbr_sweep(sc, eps, 3, &r) == RBBR_OK);
  if (r) {
    const char* csv = rbbr_result_file_content(r, 0);
    int lines = 0;
    for (const char* p = csv; *p; ++p) lines += *p == '\n';
    EXPECT(lines == 5);
    rbbr_result_free(r);
    r = NULL;
  }
  EXPECT(rbbr_sweep(sc, NULL, 0, &r) == RBBR_OK);
  rbbr_result_free(r);

  rbbr_scenario_free(sc);
  rbbr_scenario_free(NULL);
  rbbr_result_free(NULL);
}

int main(void) {
  test_pure_functions();
  test_scenario();
  if (failures) {
    fprintf(stderr, "%d failed expectations\n", failures);
    return 1;
  }
  printf("c api: all expectations met\n");
  return 0;
}
