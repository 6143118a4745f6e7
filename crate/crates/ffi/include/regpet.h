#ifndef REGPET_H
#define REGPET_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status code returned by every fallible function.
 */
typedef enum RegpetStatus {
  REGPET_STATUS_OK = 0,
  REGPET_STATUS_NULL_POINTER = 1,
  REGPET_STATUS_INVALID_ARGUMENT = 2,
  /*
   Series order or coefficient coverage insufficient for the request.
   */
  REGPET_STATUS_ORDER_TOO_SMALL = 3,
  /*
   Quadrature, rounding or conditioning failure.
   */
  REGPET_STATUS_NUMERICAL = 4,
  REGPET_STATUS_UNSUPPORTED = 5,
  /*
   Malformed JSON or non UTF-8 input.
   */
  REGPET_STATUS_PARSE = 6,
  REGPET_STATUS_IO = 7,
  /*
   A Rust panic was caught at the boundary.
   */
  REGPET_STATUS_PANIC = 8,
} RegpetStatus;

/*
 Evaluator for the error-of-modularity cocycle of a form of weight k <= 0.
 */
typedef struct RegpetCocycle RegpetCocycle;

/*
 Exact Laurent q-expansion with rational coefficients.
 */
typedef struct RegpetSeries RegpetSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or null if none.

 The pointer stays valid until the next failing call on the same thread.
 */
const char *regpet_last_error(void);

/*
 Short static description of a status code.
 */
const char *regpet_status_str(enum RegpetStatus s);

/*
 Release a string returned by this library.

 # Safety
 `s` must be null or a pointer obtained from this library that has not
 been freed yet.
 */
void regpet_string_free(char *s);

/*
 Faber basis element q^{-m} + O(q) of weight 0, known below exponent `order`.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum RegpetStatus regpet_series_faber(int64_t m, int64_t order, struct RegpetSeries **out);

/*
 Weakly holomorphic basis element q^{-m} + O(q) of even weight k < 0.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum RegpetStatus regpet_series_wh(int64_t k, int64_t m, int64_t order, struct RegpetSeries **out);

/*
 The discriminant function.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum RegpetStatus regpet_series_delta(int64_t order, struct RegpetSeries **out);

/*
 The weight 4 Eisenstein series.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum RegpetStatus regpet_series_e4(int64_t order, struct RegpetSeries **out);

/*
 J = j - 744.

 # Safety
 `out` must be valid for writing one pointer.
 */
enum RegpetStatus regpet_series_hauptmodul(int64_t order, struct RegpetSeries **out);

/*
 Parse a series from its JSON form.

 # Safety
 `json` must be a NUL-terminated string; `out` valid for writing one pointer.
 */
enum RegpetStatus regpet_series_from_json(const char *json, struct RegpetSeries **out);

/*
 Serialize a series to JSON; release the result with `regpet_string_free`.

 # Safety
 `s` must be a live series handle; `out` valid for writing one pointer.
 */
enum RegpetStatus regpet_series_to_json(const struct RegpetSeries *s, char **out);

/*
 Twice the weight of a series.

 # Safety
 `s` must be a live series handle; `out` valid for writing.
 */
enum RegpetStatus regpet_series_weight2(const struct RegpetSeries *s, int64_t *out);

/*
 Coefficient at exponent n as a double.  Exponents outside the known range
 are an error; known exponents with no stored term give 0.

 # Safety
 `s` must be a live series handle; `out` valid for writing.
 */
enum RegpetStatus regpet_series_coeff(const struct RegpetSeries *s, int64_t n, double *out);

/*
 Exact coefficient at exponent n as "p/q" or "p"; release with
 `regpet_string_free`.

 # Safety
 `s` must be a live series handle; `out` valid for writing one pointer.
 */
enum RegpetStatus regpet_series_coeff_exact(const struct RegpetSeries *s, int64_t n, char **out);

/*
 Evaluate the truncated series at tau = re + i im.

 # Safety
 `s` must be a live series handle; outputs valid for writing.
 */
enum RegpetStatus regpet_series_eval(const struct RegpetSeries *s,
                                     double re,
                                     double im,
                                     double *out_re,
                                     double *out_im);

/*
 Release a series handle.

 # Safety
 `s` must be null or a handle from this library that has not been freed.
 */
void regpet_series_free(struct RegpetSeries *s);

/*
 Regularized inner product of two level-one forms of the same weight by the
 truncated-domain route.  `err` receives the error estimate and may be null.

 # Safety
 `f`, `g` must be live series handles; `re`, `im` valid for writing.
 */
enum RegpetStatus regpet_inner_product(const struct RegpetSeries *f,
                                       const struct RegpetSeries *g,
                                       double *re,
                                       double *im,
                                       double *err);

/*
 Completed L-series L*(s) split at t0.  With `drop_constant` the constant
 term is left out, which makes s = 0 and s = k admissible.

 # Safety
 `g` must be a live series handle; `re`, `im` valid for writing.
 */
enum RegpetStatus regpet_lstar(const struct RegpetSeries *g,
                               double s,
                               double t0,
                               bool drop_constant,
                               double *re,
                               double *im);

/*
 Trace of a weight-0 form over CM points of discriminant d < 0, or over
 closed geodesics of discriminant d > 0.

 # Safety
 `f` must be a live series handle; `out` valid for writing.
 */
enum RegpetStatus regpet_trace(const struct RegpetSeries *f, int64_t d, double *out);

/*
 Kloosterman sum K(m, n; c).

 # Safety
 `out` must be valid for writing.
 */
enum RegpetStatus regpet_kloosterman(int64_t m, int64_t n, uint64_t c, double *out);

/*
 Build a cocycle evaluator for a level-one form of even weight k <= 0.
 `height` <= 0 selects the default cut-off height.

 # Safety
 `f` must be a live series handle; `out` valid for writing one pointer.
 */
enum RegpetStatus regpet_cocycle_new(const struct RegpetSeries *f,
                                     double height,
                                     struct RegpetCocycle **out);

/*
 The non-holomorphic completion g_f at tau.

 # Safety
 `c` must be a live cocycle handle; outputs valid for writing.
 */
enum RegpetStatus regpet_cocycle_g(const struct RegpetCocycle *c,
                                   double re,
                                   double im,
                                   double *out_re,
                                   double *out_im);

/*
 The error of modularity F_S at tau.

 # Safety
 `c` must be a live cocycle handle; outputs valid for writing.
 */
enum RegpetStatus regpet_cocycle_fs(const struct RegpetCocycle *c,
                                    double re,
                                    double im,
                                    double *out_re,
                                    double *out_im);

/*
 Release a cocycle handle.

 # Safety
 `c` must be null or a handle from this library that has not been freed.
 */
void regpet_cocycle_free(struct RegpetCocycle *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGPET_H */
