#ifndef ANDREEV_C_H
#define ANDREEV_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ANDREEV_API __declspec(dllexport)
#else
#define ANDREEV_API __attribute__((visibility("default")))
#endif

typedef enum andreev_status {
  ANDREEV_OK = 0,
  ANDREEV_E_NON_INTERSECTING,
  ANDREEV_E_DEGENERATE_TRIPLE,
  ANDREEV_E_NOT_SPACELIKE,
  ANDREEV_E_ILLEGAL_MOVE,
  ANDREEV_E_NOT_SIMPLE,
  ANDREEV_E_INTERNAL,
  ANDREEV_E_BAD_N,
  ANDREEV_E_MISSING_EDGE_ANGLE,
  ANDREEV_E_ENDPOINT_OUTSIDE_POLYTOPE,
  ANDREEV_E_NOT_TRUNCATED_CLASS,
  ANDREEV_E_ANGLE_TOO_FAR_FROM_PI_OVER_3,
  ANDREEV_E_SINGULAR_JACOBIAN,
  ANDREEV_E_MAX_ITER_EXCEEDED,
  ANDREEV_E_DIVERGED_RESIDUAL,
  ANDREEV_E_HOMOTOPY_STUCK,
  ANDREEV_E_WHITEHEAD_BASIN_MISS,
  ANDREEV_E_VERTEX_NEVER_CROSSED,
  ANDREEV_E_GLUE_MISMATCH,
  ANDREEV_E_BAD_ANGLES,
  ANDREEV_E_BAD_ANGLE_RANGE,
  ANDREEV_E_NON_COMPACT,
  ANDREEV_E_NOT_SUBMULTIPLE,
  ANDREEV_E_CONDITIONS_FAILED,
  ANDREEV_E_VERIFICATION_FAILED,
  ANDREEV_E_PARSE,
  ANDREEV_E_SEMANTIC,
  ANDREEV_E_IO,
  ANDREEV_E_INVALID_ARGUMENT, /* null handle or pointer */
  ANDREEV_E_UNKNOWN
} andreev_status;

/* Opaque handles. */
typedef struct andreev_problem andreev_problem;         /* complex, angles, options */
typedef struct andreev_realization andreev_realization; /* face normals */

typedef struct andreev_volume {
  double value;
  double std_error; /* 0 for closed forms */
  long long samples;
} andreev_volume;

/* Message of the last failure on the calling thread ("" if none). */
ANDREEV_API const char* andreev_last_error(void);
ANDREEV_API const char* andreev_status_name(andreev_status s);
/* Nonzero for malformed or inconsistent input, zero for numerical failures. */
ANDREEV_API int andreev_status_is_input_error(andreev_status s);

/* Angle text: "a/b pi", "pi/b", "a pi", "pi" or decimal radians. */
ANDREEV_API andreev_status andreev_parse_angle(const char* text, double* radians);

/* Problems. */
ANDREEV_API andreev_status andreev_problem_parse(const char* text, andreev_problem** out);
ANDREEV_API andreev_status andreev_problem_load(const char* path, andreev_problem** out);
ANDREEV_API void andreev_problem_free(andreev_problem* p);
ANDREEV_API int andreev_problem_face_count(const andreev_problem* p);
ANDREEV_API int andreev_problem_edge_count(const andreev_problem* p);
/* Overrides; angles in radians. */
ANDREEV_API andreev_status andreev_problem_set_k(andreev_problem* p, int k);
ANDREEV_API andreev_status andreev_problem_set_epsilon(andreev_problem* p, double epsilon);
ANDREEV_API andreev_status andreev_problem_set_delta(andreev_problem* p, double delta);
ANDREEV_API andreev_status andreev_problem_set_seed(andreev_problem* p, uint64_t seed);
ANDREEV_API andreev_status andreev_problem_set_samples(andreev_problem* p, long long samples);
/* *passes is 1 when every condition holds. The report string is owned by the
   problem and valid until the next call on it. */
ANDREEV_API andreev_status andreev_problem_check(andreev_problem* p, int* passes, const char** report);

/* Construction. The report (stages, residuals, moves) is owned by the
   problem and valid until the next call on it. */
ANDREEV_API andreev_status andreev_build(andreev_problem* p, andreev_realization** out, const char** report);

/* Realizations. */
ANDREEV_API void andreev_realization_free(andreev_realization* r);
ANDREEV_API int andreev_realization_face_count(const andreev_realization* r);
/* Normal of face i as (x0, x1, x2, x3). */
ANDREEV_API andreev_status andreev_realization_normal(const andreev_realization* r, int face, double out[4]);
/* Load from an OFF file or a state file (detected by content). */
ANDREEV_API andreev_status andreev_realization_load(const char* path, andreev_realization** out);
/* Writers replace the target atomically; nothing is written on failure. */
ANDREEV_API andreev_status andreev_write_off(const andreev_realization* r, const char* path);
ANDREEV_API andreev_status andreev_write_generators(const andreev_realization* r, const char* path);
ANDREEV_API andreev_status andreev_write_state(const andreev_realization* r, const char* path);
/* Deform r to the angles of p (same combinatorics up to relabelling). */
ANDREEV_API andreev_status andreev_deform(const andreev_realization* r, andreev_problem* p,
                                          andreev_realization** out);

/* Volumes. Lambert angles are pi/p, pi/q, pi/r. */
ANDREEV_API andreev_status andreev_volume_lambert(double p, double q, double r, andreev_volume* out);
ANDREEV_API andreev_status andreev_volume_lobell(int n, andreev_volume* out);
/* Uses the problem's seed and sample count. */
ANDREEV_API andreev_status andreev_volume_montecarlo(const andreev_realization* r, const andreev_problem* p,
                                                     andreev_volume* out);

#ifdef __cplusplus
}
#endif

#endif
