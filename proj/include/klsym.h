/* klsym: symmetric-power L-functions of Kloosterman sums by exact point
 * counting. C API over the C++ core: opaque session handle, status codes,
 * JSON/text results as heap strings released with klsym_string_free. */

#ifndef KLSYM_H
#define KLSYM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct klsym_session klsym_session;

typedef enum klsym_status {
    KLSYM_OK = 0,
    KLSYM_ERR_INVALID_ARGUMENT = 1,
    KLSYM_ERR_BUDGET_EXCEEDED = 2,
    KLSYM_ERR_CHECK_FAILED = 3,
    KLSYM_ERR_INTERNAL = 4,
    KLSYM_ERR_CACHE = 5,
    KLSYM_ERR_IO = 6
} klsym_status;

typedef enum klsym_format {
    KLSYM_FORMAT_JSON = 0,
    KLSYM_FORMAT_TEXT = 1
} klsym_format;

/* cache_dir: directory for the Kloosterman cache; NULL picks $KLSYM_CACHE,
 * falling back to ./.klsym-cache. jobs <= 0 picks $KLSYM_JOBS, falling back
 * to the hardware thread count. Returns NULL only on allocation failure. */
klsym_session* klsym_session_new(const char* cache_dir, int jobs);
void klsym_session_free(klsym_session* session);

const char* klsym_version(void);

/* Message for the last failing call on this session; valid until the next
 * call on the same session. */
const char* klsym_last_error(const klsym_session* session);

void klsym_string_free(char* s);

/* Full pipeline for one (n, p, e, k): computes L(G_m, Sym^k(Kl_n), T) and
 * runs every applicable verification (degree, bad factors, decomposition,
 * functional equation, weight purity). mode: "guarded" (default when NULL)
 * or "trust-degree". guard/den_bound < 0 pick the defaults (3 and 2).
 * On success *out gets the report; caller frees with klsym_string_free. */
klsym_status klsym_compute(klsym_session* session, int n, int64_t p, int e, int k,
                           const char* mode, int guard, int den_bound,
                           klsym_format format, char** out);

/* Table of (k, d_k, a_k, b_k, c_k, degree) for k = k_min..k_max. */
klsym_status klsym_counts(klsym_session* session, int n, int64_t p, int k_min, int k_max,
                          klsym_format format, char** out);

/* Verification battery. grid NULL or empty runs the built-in acceptance
 * grid; otherwise a grid spec like "n=2 p=3|5|7 k=0..10 mode=guarded".
 * Returns KLSYM_OK with a report even when checks fail; *ok_out (optional)
 * reports the aggregate verdict. */
klsym_status klsym_verify(klsym_session* session, const char* grid, int jobs,
                          klsym_format format, char** out, int* ok_out);

/* Congruence check: L(Sym^{k1}) = L(Sym^{k2}) mod p^m over F_p. */
klsym_status klsym_congruence(klsym_session* session, int n, int64_t p, int k1, int k2, int m,
                              klsym_format format, char** out, int* holds_out);

/* Cache administration. */
klsym_status klsym_cache_stats(klsym_session* session, char** out);
klsym_status klsym_cache_clear(klsym_session* session);
klsym_status klsym_cache_path(klsym_session* session, char** out);

#ifdef __cplusplus
}
#endif

#endif /* KLSYM_H */
