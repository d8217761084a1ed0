/* C interface to the heteroclinic connection solver. */

#pragma once

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this interface.
 */
typedef enum HetStatus {
  HET_STATUS_HET_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HET_STATUS_HET_NULL_POINTER = 1,
  /**
   * Arguments were structurally invalid (bad name, bad grid, bad option).
   */
  HET_STATUS_HET_INVALID_ARGUMENT = 2,
  /**
   * An input file or string failed to parse.
   */
  HET_STATUS_HET_PARSE_ERROR = 3,
  /**
   * The computation produced a non-finite value and aborted.
   */
  HET_STATUS_HET_NON_FINITE = 4,
  /**
   * A linear system in the dual-norm evaluation lost its pivots.
   */
  HET_STATUS_HET_SINGULAR_SYSTEM = 5,
  /**
   * File system failure.
   */
  HET_STATUS_HET_IO_ERROR = 6,
  /**
   * An internal invariant failed; the library caught the panic.
   */
  HET_STATUS_HET_PANIC = 7,
} HetStatus;

/**
 * Opaque handle: time-dependence coefficient a(·).
 */
typedef struct HetCoefficient HetCoefficient;

/**
 * Opaque handle: double-well potential with its quadratic extension.
 */
typedef struct HetPotential HetPotential;

/**
 * Opaque handle: one minimization outcome (path plus diagnostics).
 */
typedef struct HetSolveResult HetSolveResult;

/**
 * Descent options; get defaults from [`het_solve_options_default`].
 */
typedef struct HetSolveOptions {
  uint64_t max_iters;
  double tol_grad_dual;
  double tol_step;
  double armijo_c;
  double backtrack_factor;
  /**
   * 0 = steepest descent, 1 = two-point secant steps (default).
   */
  int32_t acceleration;
} HetSolveOptions;

/**
 * Flat copy of the action diagnostics of a solve, plus run metadata.
 */
typedef struct HetActionReport {
  double value;
  double grad_dual;
  double grad_l2;
  double residual_inf;
  double tail_truncation_bound;
  uint64_t iterations;
  /**
   * 1 when the dual gradient norm reached tolerance, else 0.
   */
  int32_t converged;
} HetActionReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread as a NUL-terminated string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *het_last_error_message(void);

/**
 * Creates the default double-well potential (1−x²)²/4 with a quadratic
 * extension of collar width `delta` outside |x| = 1 + delta.
 *
 * # Safety
 * `out` must be a valid pointer to a `HetPotential*` slot. On success it
 * receives an owned handle that must be released with
 * [`het_potential_free`].
 */
enum HetStatus het_potential_quartic(double delta, struct HetPotential **out);

/**
 * Releases a potential handle. Null is a no-op.
 *
 * # Safety
 * `p` must be null or a pointer previously returned by a potential
 * constructor and not yet freed.
 */
void het_potential_free(struct HetPotential *p);

/**
 * Creates a standard coefficient from its family name, e.g. "const(1.5)",
 * "rabinowitz_gauss", "periodic_sin", "asym_periodic", "coercive_quad(2)".
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid slot; on
 * success the handle must be released with [`het_coefficient_free`].
 */
enum HetStatus het_coefficient_standard(const char *name, struct HetCoefficient **out);

/**
 * Releases a coefficient handle. Null is a no-op.
 *
 * # Safety
 * `c` must be null or an unfreed pointer from a coefficient constructor.
 */
void het_coefficient_free(struct HetCoefficient *c);

/**
 * The documented default solve options.
 */
struct HetSolveOptions het_solve_options_default(void);

/**
 * Minimizes the action on a symmetric grid of `nodes` points over
 * [−half_width, half_width], starting from the default seed.
 *
 * Non-convergence is not an error: inspect `converged` in the report.
 *
 * # Safety
 * `pot` and `coef` must be live handles from this library, `options` null
 * (for defaults) or a valid pointer, `out` a valid slot; on success it
 * receives an owned handle to free with [`het_result_free`].
 */
enum HetStatus het_solve(const struct HetPotential *pot,
                         const struct HetCoefficient *coef,
                         double eps,
                         double half_width,
                         uint64_t nodes,
                         const struct HetSolveOptions *options,
                         struct HetSolveResult **out);

/**
 * Copies the action diagnostics of a solve into `report`.
 *
 * # Safety
 * `res` must be a live result handle and `report` a valid pointer.
 */
enum HetStatus het_result_report(const struct HetSolveResult *res, struct HetActionReport *report);

/**
 * Number of grid nodes in a solve result, 0 for null.
 *
 * # Safety
 * `res` must be null or a live result handle.
 */
uint64_t het_result_node_count(const struct HetSolveResult *res);

/**
 * Copies node times and values into caller buffers of length `len`, which
 * must equal [`het_result_node_count`]. Either destination may be null to
 * skip it.
 *
 * # Safety
 * `res` must be a live result handle; non-null `times`/`values` must point
 * to writable arrays of at least `len` doubles.
 */
enum HetStatus het_result_copy_values(const struct HetSolveResult *res,
                                      double *times,
                                      double *values,
                                      uint64_t len);

/**
 * Releases a solve result. Null is a no-op.
 *
 * # Safety
 * `res` must be null or an unfreed pointer from [`het_solve`].
 */
void het_result_free(struct HetSolveResult *res);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
