/* ergolab — ergodic constants, boundary blow-up and Dirichlet solutions for
 * the equation family  -|∇u|^α F(D²u) + |∇u|^β + λ|u|^α u = f  on intervals
 * and radial balls.
 *
 * C API: opaque handles, status codes. All functions are thread-compatible
 * (no shared mutable state); a single handle must not be used concurrently.
 */
#ifndef ERGOLAB_H
#define ERGOLAB_H

#include <stddef.h>

#if defined(_WIN32)
#  define ERGOLAB_API __declspec(dllexport)
#else
#  define ERGOLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ergolab_status {
  ERGOLAB_OK = 0,
  ERGOLAB_ERR_ALPHA_OUT_OF_RANGE = 1,
  ERGOLAB_ERR_BETA_OUT_OF_RANGE = 2,
  ERGOLAB_ERR_BAD_ELLIPTICITY = 3,
  ERGOLAB_ERR_NEGATIVE_LAMBDA = 4,
  ERGOLAB_ERR_TRACE_NEEDS_EQUAL_CONSTANTS = 5,
  ERGOLAB_ERR_SINGULAR_GRADIENT = 6,
  ERGOLAB_ERR_BAD_FORCING = 7,
  ERGOLAB_ERR_SINGULAR_FORCING_AT_NODE = 8,
  ERGOLAB_ERR_BAD_DOMAIN = 9,
  ERGOLAB_ERR_GRID_TOO_COARSE = 10,
  ERGOLAB_ERR_NOT_CONVERGED = 11,
  ERGOLAB_ERR_NAN_DETECTED = 12,
  ERGOLAB_ERR_LADDER_NOT_SETTLED = 13,
  ERGOLAB_ERR_LADDER_UNSTABLE = 14,
  ERGOLAB_ERR_WINDOW_TOO_NARROW = 15,
  ERGOLAB_ERR_REGION_EMPTY = 16,
  ERGOLAB_ERR_OUTSIDE_DOMAIN = 17,
  ERGOLAB_ERR_UNSET_PREFACTOR = 18,
  ERGOLAB_ERR_HYPOTHESIS_UNMET = 19,
  ERGOLAB_ERR_CONFIG = 20,
  ERGOLAB_ERR_IO = 21,
  ERGOLAB_ERR_INVALID_ARGUMENT = 22,
  ERGOLAB_ERR_CHECK_FAILED = 23,
  ERGOLAB_ERR_INTERNAL = 24
} ergolab_status;

/* uniqueness classification of the explosive problem */
#define ERGOLAB_UNIQUE 0
#define ERGOLAB_UNIQUE_IF_SINGULAR_REGIME 1
#define ERGOLAB_UNIQUENESS_UNKNOWN 2

/* vanishing-discount case tags */
#define ERGOLAB_CASE_ERGODIC_REGIME 0
#define ERGOLAB_CASE_DIRICHLET_SOLVABLE 1
#define ERGOLAB_CASE_UNDETERMINED 2

/* ergodic estimator paths */
#define ERGOLAB_PATH_EXPLOSIVE 0
#define ERGOLAB_PATH_DIRICHLET 1

/* Opaque handles. Create/free in matched pairs; freeing NULL is a no-op. */
typedef struct ergolab_problem ergolab_problem;
typedef struct ergolab_field ergolab_field;
typedef struct ergolab_ergodic ergolab_ergodic;

ERGOLAB_API const char* ergolab_version(void);
ERGOLAB_API const char* ergolab_status_name(ergolab_status status);

/* Problem construction from config text (same key=value format the CLI
 * reads; sections [equation], [domain], [forcing] are required, the rest
 * optional). On failure a diagnostic is copied into errbuf when given. */
ERGOLAB_API ergolab_status ergolab_problem_from_string(const char* text,
                                                       ergolab_problem** out,
                                                       char* errbuf, size_t errbuf_len);
ERGOLAB_API ergolab_status ergolab_problem_from_file(const char* path,
                                                     ergolab_problem** out,
                                                     char* errbuf, size_t errbuf_len);
ERGOLAB_API void ergolab_problem_free(ergolab_problem* p);

/* Derived quantities of a validated problem. */
ERGOLAB_API ergolab_status ergolab_problem_exponents(const ergolab_problem* p,
                                                     double* gamma_out, double* tau_out,
                                                     double* grad_rate_out);
ERGOLAB_API ergolab_status ergolab_problem_boundary_constant(const ergolab_problem* p,
                                                             double* c_out);
ERGOLAB_API ergolab_status ergolab_problem_uniqueness(const ergolab_problem* p,
                                                      int* status_out);
/* Upper bound on the ergodic constant from the power test function
 * (interval domains only). */
ERGOLAB_API ergolab_status ergolab_mu_star_upper_bound(const ergolab_problem* p,
                                                       double* bound_out);

/* Solvers.  grid_n <= 0 selects the problem's configured grid size.
 * For ball domains g_lo is ignored and g_hi is the outer boundary value.
 * A non-converged solve returns ERGOLAB_ERR_NOT_CONVERGED with *out still
 * populated so the partial field and report can be inspected. */
ERGOLAB_API ergolab_status ergolab_solve_dirichlet(const ergolab_problem* p, int grid_n,
                                                   double g_lo, double g_hi,
                                                   ergolab_field** out);
ERGOLAB_API ergolab_status ergolab_solve_explosive(const ergolab_problem* p, int grid_n,
                                                   ergolab_field** out);

ERGOLAB_API void ergolab_field_free(ergolab_field* f);
ERGOLAB_API int ergolab_field_size(const ergolab_field* f);
/* Copies up to n entries per non-NULL output array (x coordinate, distance
 * to the boundary, solution value). */
ERGOLAB_API ergolab_status ergolab_field_copy(const ergolab_field* f, double* x,
                                              double* d, double* u, int n);
ERGOLAB_API ergolab_status ergolab_field_solve_info(const ergolab_field* f,
                                                    int* converged, int* sweeps,
                                                    double* final_residual);
/* Least-squares boundary-rate fit of the field against its blow-up law. */
ERGOLAB_API ergolab_status ergolab_field_fit_rate(const ergolab_field* f,
                                                  double* exponent_out,
                                                  double* prefactor_out,
                                                  double* r_squared_out);

/* Vanishing-discount estimate of the ergodic constant along the schedule
 * lambda_k = 2^-k, k = 0..lambda_k_max. */
ERGOLAB_API ergolab_status ergolab_estimate_ergodic(const ergolab_problem* p, int grid_n,
                                                    int path, int lambda_k_max,
                                                    ergolab_ergodic** out);
ERGOLAB_API void ergolab_ergodic_free(ergolab_ergodic* e);
ERGOLAB_API ergolab_status ergolab_ergodic_result(const ergolab_ergodic* e, double* c_out,
                                                  int* case_tag_out);
ERGOLAB_API int ergolab_ergodic_ladder_size(const ergolab_ergodic* e);
ERGOLAB_API ergolab_status ergolab_ergodic_ladder_copy(const ergolab_ergodic* e,
                                                       double* lambdas, double* c_values,
                                                       int n);

/* Full experiment driver: command in {exponents, solve, explosive, ergodic,
 * rate, verify}; writes profile.csv / report.txt / run.log under out_dir and
 * prints the command summary line(s) to stdout.  grid_n_override <= 0 keeps
 * the configured grid size. */
ERGOLAB_API ergolab_status ergolab_run(const char* command, const char* config_path,
                                       const char* out_dir, int grid_n_override,
                                       char* errbuf, size_t errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* ERGOLAB_H */
