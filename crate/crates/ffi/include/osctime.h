#ifndef OSCTIME_H
#define OSCTIME_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum OsctimeStatus {
  OSCTIME_STATUS_OK = 0,
  OSCTIME_STATUS_NULL_POINTER = 1,
  OSCTIME_STATUS_INVALID_ARGUMENT = 2,
  OSCTIME_STATUS_PARSE = 3,
  OSCTIME_STATUS_DOMAIN = 4,
  OSCTIME_STATUS_POLE = 5,
  OSCTIME_STATUS_BRANCH_CUT = 6,
  OSCTIME_STATUS_SINGULAR_POINT = 7,
  OSCTIME_STATUS_ENGINE_MISMATCH = 8,
  OSCTIME_STATUS_NOT_EXACT = 9,
  OSCTIME_STATUS_TOLERANCE = 10,
  OSCTIME_STATUS_PANIC = 11,
} OsctimeStatus;

// Which form `osctime_form_eval` and `osctime_ccr_residual` use.
typedef enum OsctimeForm {
  // Regularized angle form at the given ε.
  OSCTIME_FORM_T_EPS = 0,
  // Continuum form; ε is ignored.
  OSCTIME_FORM_T_AB = 1,
  // Bounded POVM form truncated at N = 100; ε is ignored.
  OSCTIME_FORM_TG = 2,
} OsctimeForm;

// Opaque Gaussian-moment vector.
typedef struct OsctimeVector OsctimeVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the next
// failing call on the same thread; do not free.
const char *osctime_last_error(void);

// Library version as a static NUL-terminated string.
const char *osctime_version(void);

// `coeff · x^power · exp(i·width·x²/2)`. `coeff` and `width` are exact
// scalars such as `"1"`, `"1/2i"` or `"3/10+7/10i"`; the width needs a
// positive imaginary part.
//
// # Safety
// `coeff` and `width` must be NUL-terminated strings; `out` must be writable.
enum OsctimeStatus osctime_vector_monomial(const char *coeff,
                                           uint32_t power,
                                           const char *width,
                                           struct OsctimeVector **out);

// `x^power ξ_{αi,ε}` for rational `α` and an `ε` with rational square root.
//
// # Safety
// `alpha` and `eps` must be NUL-terminated strings; `out` must be writable.
enum OsctimeStatus osctime_vector_xi(const char *alpha,
                                     const char *eps,
                                     uint32_t power,
                                     struct OsctimeVector **out);

// `a + b` as a new handle.
//
// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum OsctimeStatus osctime_vector_add(const struct OsctimeVector *a,
                                      const struct OsctimeVector *b,
                                      struct OsctimeVector **out);

// Human-readable form of the vector; free with `osctime_string_free`.
//
// # Safety
// `v` must be a live handle or NULL.
char *osctime_vector_to_string(const struct OsctimeVector *v);

// # Safety
// `v` must come from this library and not be freed twice. NULL is ignored.
void osctime_vector_free(struct OsctimeVector *v);

// # Safety
// `s` must come from this library and not be freed twice. NULL is ignored.
void osctime_string_free(char *s);

// `⟨ψ, φ⟩`.
//
// # Safety
// Handles must be live; `re` and `im` must be writable.
enum OsctimeStatus osctime_inner_product(const struct OsctimeVector *psi,
                                         const struct OsctimeVector *phi,
                                         double *re,
                                         double *im);

// The form value `𝔱[ψ, φ]`. `eps` is read only for `TEps` and may be NULL otherwise.
//
// # Safety
// Handles must be live; `eps` NUL-terminated or NULL; `re` and `im` writable.
enum OsctimeStatus osctime_form_eval(enum OsctimeForm form,
                                     const struct OsctimeVector *psi,
                                     const struct OsctimeVector *phi,
                                     const char *eps,
                                     double *re,
                                     double *im);

// The continued matrix element `𝔱̂(x^a ξ_z, x^b ξ_z)` at `z = z_re + i z_im`.
//
// # Safety
// `re` and `im` must be writable.
enum OsctimeStatus osctime_t_hat(uint32_t a,
                                 uint32_t b,
                                 double z_re,
                                 double z_im,
                                 double *re,
                                 double *im);

// `|𝔱[hφ, ψ] − conj(𝔱[hψ, φ]) + i⟨φ, ψ⟩|`. Returns `Tolerance` when it exceeds
// `tolerance·(1 + |⟨φ, ψ⟩|)`; `residual` is written either way. `TG` is rejected.
//
// # Safety
// Handles must be live; `eps` NUL-terminated (for `TEps`) or NULL; `residual` writable.
enum OsctimeStatus osctime_ccr_residual(enum OsctimeForm form,
                                        const struct OsctimeVector *phi,
                                        const struct OsctimeVector *psi,
                                        const char *eps,
                                        double tolerance,
                                        double *residual);

// The `𝔱_ε` CCR residual on `(x^a ξ_{αi,ε}, x^b ξ_{βi,ε})`; works for any
// positive rational `ε`, falling back to floats when `√ε` is irrational.
//
// # Safety
// Strings must be NUL-terminated; `residual` writable.
enum OsctimeStatus osctime_ccr_gaussian_pair(const char *eps,
                                             uint32_t a,
                                             uint32_t b,
                                             const char *alpha,
                                             const char *beta,
                                             double tolerance,
                                             double *residual);

// Power-iteration estimate of the norm of the truncated T_G matrix of order `n`.
// Returns `Tolerance` if the estimate exceeds 2π or fails to converge.
//
// # Safety
// `estimate` must be writable.
enum OsctimeStatus osctime_tg_norm(size_t n, double *estimate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCTIME_H */
