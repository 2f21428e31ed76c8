#ifndef EQUIORBIT_EQUIORBIT_H
#define EQUIORBIT_EQUIORBIT_H

/* C interface to the equiorbit library.
 *
 * Objects are opaque handles released with the matching *_free call.
 * Functions returning text allocate it; release it with eo_string_free.
 * Every call returns an eo_status; on failure eo_last_error() describes the
 * problem (the message is thread-local and valid until the next call). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EQUIORBIT_BUILDING)
#    define EO_API __declspec(dllexport)
#  else
#    define EO_API __declspec(dllimport)
#  endif
#else
#  define EO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eo_status {
  EO_OK = 0,
  EO_INVALID_PARAMETER = 1,
  EO_NOT_FINITE = 2,
  EO_INVALID_PAIR = 3,
  EO_INCOMPATIBLE_MASSES = 4,
  EO_DEGENERATE_CORE = 5,
  EO_INVALID_DATA = 6,
  EO_INCOMPATIBLE_SUM = 7,
  EO_PLANAR_DEGENERATE = 8,
  EO_INVALID_FRAME = 9,
  EO_UNSUPPORTED_EXPONENT = 10,
  EO_INVALID_CONFIGURATION = 11,
  EO_INVALID_WITNESS = 12,
  EO_GRADIENT_UNDEFINED = 13,
  EO_INVALID_PERIOD = 14,
  EO_EMPTY_CONSTRAINT = 15,
  EO_NEAR_COLLISION = 16,
  EO_PARSE = 17,
  EO_IO = 18,
  EO_INTERNAL = 100
} eo_status;

typedef struct eo_group eo_group;
typedef struct eo_loop eo_loop;

EO_API const char* eo_version(void);
/* Kebab-case name such as "invalid-parameter". */
EO_API const char* eo_status_name(eo_status status);
EO_API const char* eo_last_error(void);
EO_API void eo_string_free(char* text);

/* Threads used for action evaluation (EQUIORBIT_THREADS caps it). */
EO_API int eo_thread_count(void);

/* ---- point groups ---- */

/* Catalog rows as a JSON array. family may be NULL (all families);
 * p = 0 lists every parameter 1..pmax for parametrized families; pmax = 0
 * means 12. */
EO_API eo_status eo_catalog_json(const char* family, int p, int pmax, char** out_json);
/* Cores passing the admissibility rule among catalog groups with p <= pmax
 * (eliminated != 0 also drops cores containing plane reflections). */
EO_API eo_status eo_admissible_cores_json(int pmax, int eliminated, char** out_json);
/* Index-2 extensions of an admissible core given as a label object
 * {"name": .., "p": ..}. */
EO_API eo_status eo_admissible_extensions_json(const char* label_json, char** out_json);

/* ---- symmetry groups ---- */

/* Accepts the generator form and the krh form. */
EO_API eo_status eo_group_from_json(const char* json, eo_group** out);
EO_API void eo_group_free(eo_group* group);
EO_API eo_status eo_group_to_json(const eo_group* group, char** out_json);
EO_API eo_status eo_group_order(const eo_group* group, size_t* out);
EO_API eo_status eo_group_bodies(const eo_group* group, int* out);
EO_API eo_status eo_group_decompose_json(const eo_group* group, char** out_json);
/* omega may be NULL (zero). */
EO_API eo_status eo_group_check_json(const eo_group* group, const double omega[3], char** out_json);
EO_API eo_status eo_group_sum(const eo_group* a, const eo_group* b, eo_group** out);
/* Rotating-frame reduction; theta in radians per unit time. */
EO_API eo_status eo_group_normalize_frame(const eo_group* group, eo_group** out, double* theta, double axis[3]);

/* ---- local variations ---- */

EO_API eo_status eo_s_integral(const double s[3], const double delta[3], double alpha, double* out);

/* ---- loops and minimization ---- */

typedef struct eo_minimize_options {
  int modes;
  int max_iter;
  double grad_tol;
  int max_restarts;
  int samples;      /* 0 = max(1024, 8 modes) */
  int polish_modes; /* 0 = off */
  int verify;       /* non-zero runs the ODE check */
} eo_minimize_options;

EO_API void eo_minimize_options_default(eo_minimize_options* options);

/* warm_start may be NULL. The report is JSON; *out_loop carries the masses,
 * alpha and omega used. Returns EO_OK even for colliding results; the report
 * says so. */
EO_API eo_status eo_minimize(const eo_group* group, const double omega[3], double alpha, uint64_t seed,
                             const eo_minimize_options* options, const eo_loop* warm_start, eo_loop** out_loop,
                             char** out_report_json);

/* Trajectory files. */
EO_API eo_status eo_loop_from_json(const char* json, eo_loop** out);
EO_API void eo_loop_free(eo_loop* loop);
/* samples > 0 embeds sampled positions. */
EO_API eo_status eo_loop_to_json(const eo_loop* loop, int samples, char** out_json);
EO_API eo_status eo_loop_action(const eo_loop* loop, double* out);
/* ODE residual, collision summary, action and gradient norm as JSON. */
EO_API eo_status eo_loop_verify_json(const eo_loop* loop, char** out_json);
/* format is "svg" or "csv"; view may be NULL (stored view axis, else z). */
EO_API eo_status eo_loop_plot(const eo_loop* loop, const char* format, const double view[3], int samples,
                              char** out_text);

#ifdef __cplusplus
}
#endif

#endif
