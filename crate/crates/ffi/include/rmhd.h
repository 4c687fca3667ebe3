/* C interface of the rmhd library. Generated; do not edit. */

#ifndef RMHD_H
#define RMHD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every API call.
 */
typedef enum RmhdStatus {
  /**
   * Success.
   */
  RMHD_OK = 0,
  /**
   * Null pointer, malformed JSON, or an argument outside its domain.
   */
  RMHD_INVALID_ARGUMENT = 1,
  /**
   * The state violates the admissibility inequalities or the planar
   * sheet constraints.
   */
  RMHD_INADMISSIBLE_STATE = 2,
  /**
   * The family parameter lies outside the hyperbolicity window.
   */
  RMHD_WINDOW_VIOLATION = 3,
  /**
   * The sheet pair is degenerate: parallel or vanishing tangential
   * fields, or a singular parameter map.
   */
  RMHD_DEGENERATE_PAIR = 4,
  /**
   * An internal numerical procedure failed to converge or panicked.
   */
  RMHD_NUMERICAL_FAILURE = 5,
} RmhdStatus;

/**
 * Opaque primitive state handle.
 */
typedef struct RmhdState RmhdState;

/**
 * Pointwise admissibility report of a state.
 */
typedef struct RmhdAdmissibility {
  double rho;
  double a2;
  double cs2;
  double speed;
  bool rho_positive;
  bool pressure_derivative_positive;
  bool causal;
  bool subluminal;
  bool admissible;
} RmhdAdmissibility;

/**
 * Stability verdict for a planar current-vortex sheet pair. Index 0 is the
 * plus side, index 1 the minus side.
 */
typedef struct RmhdStabilityReport {
  /**
   * Stability margin; positive means stable.
   */
  double g;
  /**
   * Determinant of the tangential-field pair.
   */
  double det_tangential;
  double lambda_tilde[2];
  double lambda[2];
  /**
   * Per-side window bounds on lambda_tilde.
   */
  double bounds[2];
  /**
   * Sine of the angle between the tangential fields.
   */
  double sin_dphi;
  bool nondegenerate;
  bool stable;
  bool windows_ok;
} RmhdStabilityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a state from components: pressure, 4-velocity spatial part u[3],
 * magnetic field h[3], specific entropy, and the adiabatic exponent of the
 * ideal gamma-law closure. On success writes a handle the caller must
 * release with rmhd_state_free.
 *
 * # Safety
 * `u` and `h` must point to 3 doubles; `out` must be a valid pointer.
 */
enum RmhdStatus rmhd_state_new(double p,
                               const double *u,
                               const double *h,
                               double s,
                               double gamma,
                               struct RmhdState **out);

/**
 * Create a state from its JSON form
 * {"p": .., "u": [..], "H": [..], "S": .., "eos": {"gamma": ..}}.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum RmhdStatus rmhd_state_parse(const char *json, struct RmhdState **out);

/**
 * Release a state handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle produced by this library that has not
 * been freed already.
 */
void rmhd_state_free(struct RmhdState *state);

/**
 * Evaluate the admissibility report of a state. Always succeeds for a
 * non-null handle; the verdict is carried in the report flags.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
enum RmhdStatus rmhd_state_check(const struct RmhdState *state, struct RmhdAdmissibility *out);

/**
 * Assemble the base symmetric quadruple. `out` receives 256 doubles: the
 * four 8x8 matrices (temporal, then the three spatial directions), each
 * row-major, in the component order (p, u1, u2, u3, H1, H2, H3, S).
 *
 * # Safety
 * `state` must be a live handle; `out` must point to 256 doubles.
 */
enum RmhdStatus rmhd_matrices_primary(const struct RmhdState *state, double *out);

/**
 * Assemble the one-parameter alternative symmetrizer family at `lambda`.
 * Same output layout as rmhd_matrices_primary. At lambda = 0 the family
 * coincides with the base form up to assembly rounding (about 1e-11
 * relative). The window is not enforced here.
 *
 * # Safety
 * `state` must be a live handle; `out` must point to 256 doubles.
 */
enum RmhdStatus rmhd_matrices_family(const struct RmhdState *state, double lambda, double *out);

/**
 * Hyperbolicity window bound m of the family parameter: the family's
 * temporal matrix stays positive definite for |lambda| < m.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
enum RmhdStatus rmhd_window_bound(const struct RmhdState *state, double *out);

/**
 * Evaluate the linear stability of a planar current-vortex sheet from its
 * two side states. Sides must satisfy the planar constraints (vanishing
 * normal velocity and field along the first axis).
 *
 * # Safety
 * `plus` and `minus` must be live handles; `out` must be a valid pointer.
 */
enum RmhdStatus rmhd_sheet_stability(const struct RmhdState *plus,
                                     const struct RmhdState *minus,
                                     double det_eps,
                                     struct RmhdStabilityReport *out);

/**
 * Evaluate the boundary quadratic form of a sheet side at family parameter
 * `lambda` on the perturbation `du` (8 doubles in component order), through
 * both the matrix route and the closed form.
 *
 * # Safety
 * `side` must be a live handle; `du` must point to 8 doubles; `quadratic`
 * and `closed` must be valid pointers.
 */
enum RmhdStatus rmhd_boundary_form(const struct RmhdState *side,
                                   double lambda,
                                   const double *du,
                                   double *quadratic,
                                   double *closed);

/**
 * Residual check of the quasilinear form against finite-difference
 * Jacobians of the conservative system at this state, over `trials`
 * seeded random constrained derivative draws at family parameter `lambda`
 * (0 selects the base form). Writes the maximum normalized residual.
 *
 * # Safety
 * `state` must be a live handle; `max_residual` must be a valid pointer.
 */
enum RmhdStatus rmhd_equivalence_residual(const struct RmhdState *state,
                                          double lambda,
                                          uint32_t trials,
                                          uint64_t seed,
                                          double *max_residual);

/**
 * Static description of a status code. Never null.
 */
const char *rmhd_strerror(enum RmhdStatus status);

/**
 * Copy the detail message of this thread's most recent failure into `buf`
 * (NUL-terminated, truncated to `cap` bytes). Returns the full message
 * length in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (only the length is
 * returned then).
 */
size_t rmhd_last_error_message(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RMHD_H */
