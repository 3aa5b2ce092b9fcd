/* canht — canonical heights of rational points on elliptic curves over Q.
 *
 * C interface of the shared library.  All big numbers cross the boundary as
 * decimal strings ("123", "-4/9"), so no precision is lost.  Every function
 * that can fail returns a canht_status; out-parameters are written only on
 * CANHT_OK.  Strings returned through char** are allocated by the library
 * and must be released with canht_string_free.
 */

#ifndef CANHT_H
#define CANHT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CANHT_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CANHT_API __attribute__((visibility("default")))
#else
#define CANHT_API
#endif

typedef enum canht_status {
    CANHT_OK = 0,
    CANHT_ERR_PARSE = 1,         /* malformed number, point or option    */
    CANHT_ERR_NOT_ON_CURVE = 2,  /* point fails the curve equation       */
    CANHT_ERR_SINGULAR = 3,      /* discriminant vanishes                */
    CANHT_ERR_RANGE = 4,         /* argument outside the documented range */
    CANHT_ERR_INTERNAL = 5,      /* invariant violation inside the library */
    CANHT_ERR_NULL = 6           /* required pointer argument was NULL   */
} canht_status;

typedef struct canht_curve canht_curve;
typedef struct canht_result canht_result;

typedef struct canht_options {
    int arch_series;            /* 0: quadratic iteration, 1: series evaluation */
    const char* trial_division; /* decimal bound T >= 2, or NULL/"1" to disable */
    int variant_2b4;            /* shorter truncation + convergent reconstruction */
    int incremental_basis;      /* refine the coprime basis inside the loop */
} canht_options;

CANHT_API const char* canht_version(void);
CANHT_API const char* canht_status_message(canht_status s);
CANHT_API void canht_string_free(char* s);
CANHT_API void canht_options_init(canht_options* opts);

/* --- curves ------------------------------------------------------------ */

/* a1..a6 are decimal integers. */
CANHT_API canht_status canht_curve_new(const char* a1, const char* a2, const char* a3,
                                       const char* a4, const char* a6, canht_curve** out);
CANHT_API void canht_curve_free(canht_curve* c);

/* Decimal string of the discriminant. */
CANHT_API canht_status canht_curve_discriminant(const canht_curve* c, char** out);

/* --- height computation ------------------------------------------------ */

/* x and y are decimal integers or fractions "num/den"; pass NULL for both
 * to use the point at infinity.  precision_bits is the absolute accuracy of
 * every reported numeric field.  opts may be NULL for defaults. */
CANHT_API canht_status canht_compute(const canht_curve* c, const char* x, const char* y,
                                     unsigned long precision_bits, const canht_options* opts,
                                     canht_result** out);
CANHT_API void canht_result_free(canht_result* r);

/* Fixed-point decimal renderings with `digits` digits after the point. */
CANHT_API canht_status canht_result_h_canonical(const canht_result* r, int digits, char** out);
CANHT_API canht_status canht_result_h_naive(const canht_result* r, int digits, char** out);
CANHT_API canht_status canht_result_psi_finite_value(const canht_result* r, int digits, char** out);
/* Fails with CANHT_ERR_RANGE when the archimedean part is not defined
 * (2P = O). */
CANHT_API canht_status canht_result_psi_infinity(const canht_result* r, int digits, char** out);

/* 0 when the point is not torsion, otherwise its exact order. */
CANHT_API canht_status canht_result_torsion_order(const canht_result* r, unsigned* out);

/* Exact formal terms of the finite part: pairwise coprime bases q with
 * rational coefficients mu, as decimal / fraction strings. */
CANHT_API canht_status canht_result_term_count(const canht_result* r, size_t* out);
CANHT_API canht_status canht_result_term(const canht_result* r, size_t index, char** q_out,
                                         char** mu_out);

#ifdef __cplusplus
}
#endif

#endif /* CANHT_H */
