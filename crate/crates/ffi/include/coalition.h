#ifndef COALITION_H
#define COALITION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoalitionSmoothing {
  COALITION_SMOOTHING_NONE = 0,
  COALITION_SMOOTHING_LP_SHIFT = 1,
  COALITION_SMOOTHING_SOFTMAX = 2,
} CoalitionSmoothing;

typedef enum CoalitionStatus {
  COALITION_STATUS_OK = 0,
  COALITION_STATUS_NULL_POINTER = 1,
  COALITION_STATUS_INVALID_ARGUMENT = 2,
  COALITION_STATUS_NOT_SYMMETRIC = 3,
  COALITION_STATUS_NUMERICAL = 4,
  COALITION_STATUS_IO = 5,
  COALITION_STATUS_PARSE = 6,
  COALITION_STATUS_PANIC = 7,
} CoalitionStatus;

/**
 * Opaque payoff tensor.
 */
typedef struct CoalitionTensor CoalitionTensor;

/**
 * Solver settings. Obtain defaults from `coalition_solver_options_default`.
 */
typedef struct CoalitionSolverOptions {
  enum CoalitionSmoothing smoothing;
  /**
   * `p` for `LpShift`, `epsilon` for `Softmax`; ignored for `None`.
   */
  double smoothing_param;
  size_t restarts;
  uint64_t rng_seed;
  size_t max_iter;
  double grad_tol;
  /**
   * Quasi-Newton when true, projected gradient otherwise.
   */
  bool quasi_newton;
  /**
   * Penalize the simplex constraints instead of projecting.
   */
  bool soft_constraints;
  bool adaptive_smoothing;
} CoalitionSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next library call on the same thread.
 */
const char *coalition_last_error(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 */
void coalition_string_free(char *s);

/**
 * Releases a tensor. NULL is ignored.
 */
void coalition_tensor_free(struct CoalitionTensor *t);

/**
 * Builds a tensor from `n^3` row-major entries, index `(i*n + j)*n + k`.
 * With `symmetric` set the symmetry rules are checked and the tensor is
 * marked symmetric zero-sum.
 */
enum CoalitionStatus coalition_tensor_new(size_t n,
                                          const double *entries,
                                          size_t len,
                                          bool symmetric,
                                          struct CoalitionTensor **out);

/**
 * Random symmetric zero-sum tensor with entries drawn from `[-1, 1]`.
 */
enum CoalitionStatus coalition_tensor_random(size_t n, uint64_t seed, struct CoalitionTensor **out);

/**
 * One of `odds-evens-omo`, `odds-evens-omi`, `rps-omo`, `rps-omi`,
 * `family222-omo-like`, `family222-omi-like`; `alpha` is used by the
 * 2x2x2 families only.
 */
enum CoalitionStatus coalition_tensor_benchmark(const char *name,
                                                double alpha,
                                                struct CoalitionTensor **out);

/**
 * Guts poker restricted to the thresholds `0, 1/n, ..., 1 - 1/n`.
 */
enum CoalitionStatus coalition_tensor_guts(size_t n, struct CoalitionTensor **out);

/**
 * Parses a tensor from its JSON form `{"n": .., "entries": [..], "symmetric_zero_sum": ..}`.
 */
enum CoalitionStatus coalition_tensor_from_json(const char *json, struct CoalitionTensor **out);

/**
 * JSON form of a tensor; free with `coalition_string_free`.
 */
enum CoalitionStatus coalition_tensor_to_json(const struct CoalitionTensor *t, char **out);

/**
 * Number of pure strategies per player, or 0 for NULL.
 */
size_t coalition_tensor_n(const struct CoalitionTensor *t);

/**
 * `sum x_i y_j z_k P_ijk` for mixed strategies of length `n`.
 */
enum CoalitionStatus coalition_expected_payoff(const struct CoalitionTensor *t,
                                               const double *x,
                                               const double *y,
                                               const double *z,
                                               double *out);

/**
 * Largest violation of `P_ijk = P_ikj` and `P_ijk + P_jik + P_kij = 0`.
 */
enum CoalitionStatus coalition_validate_symmetry(const struct CoalitionTensor *t,
                                                 double *max_violation,
                                                 bool *pass);

struct CoalitionSolverOptions coalition_solver_options_default(void);

/**
 * Synchronous coalition value `V_S`. `x_out` (length `n`, may be NULL)
 * receives player 1's maximin strategy. NULL options mean defaults.
 */
enum CoalitionStatus coalition_solve_sync(const struct CoalitionTensor *t,
                                          const struct CoalitionSolverOptions *opts,
                                          double *value,
                                          double *x_out);

/**
 * Asynchronous coalition value `V_A`. `y_out` and `z_out` (length `n`, may
 * be NULL) receive the coalition members' strategies.
 */
enum CoalitionStatus coalition_solve_async(const struct CoalitionTensor *t,
                                           const struct CoalitionSolverOptions *opts,
                                           double *value,
                                           double *y_out,
                                           double *z_out);

/**
 * Full value report as JSON. `config_json` is a solver configuration
 * object; NULL or `"{}"` selects the defaults.
 */
enum CoalitionStatus coalition_solve_json(const struct CoalitionTensor *t,
                                          const char *config_json,
                                          char **out);

/**
 * Synchronous value `T(V)` of continuous Guts with continuation value `v`,
 * and player 1's optimal threshold.
 */
enum CoalitionStatus coalition_guts_sync_value(double v, double *value, double *p1);

/**
 * Player 1's one-round expected return in continuous Guts.
 */
enum CoalitionStatus coalition_guts_alpha(double p1, double p2, double p3, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* COALITION_H */
