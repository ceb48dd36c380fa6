#ifndef HGFASYM_H
#define HGFASYM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HGFASYM_OK 0

// A required pointer argument was null.
#define HGFASYM_ERR_NULL_POINTER -100

// An argument could not be interpreted (bad UTF-8, zero denominator, unknown name).
#define HGFASYM_ERR_INVALID_ARGUMENT -101

// The output buffer cannot hold the string and its terminator.
#define HGFASYM_ERR_BUFFER_TOO_SMALL -102

// The library panicked; this is a bug.
#define HGFASYM_ERR_PANIC -103

// Side of the cut `[1, inf)` from which real `z >= 1` is approached.
#define HGFASYM_SIDE_UPPER 0

#define HGFASYM_SIDE_LOWER 1

// Parameters `(a0, b0, c0)`, rates and scale of `F(a0 + e1 l, b0 + e2 l; c0 + e3 l; z)`.
typedef struct HgfasymCase HgfasymCase;

// An arbitrary-precision complex number.
typedef struct HgfasymValue HgfasymValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the last failure on this thread into `buf`.
//
// The message is empty after a successful call.
int32_t hgfasym_last_error(char *buf, size_t len);

// A value from its real and imaginary parts, rounded to `bits`.
int32_t hgfasym_value_new(double re, double im, uint32_t bits, struct HgfasymValue **out);

// Releases a value; null is ignored.
void hgfasym_value_free(struct HgfasymValue *value);

// Real and imaginary parts rounded to double.
int32_t hgfasym_value_parts(const struct HgfasymValue *value, double *re, double *im);

// `re,im` in decimal with `digits` significant digits (0 for the full precision).
int32_t hgfasym_value_to_string(const struct HgfasymValue *value,
                                size_t digits,
                                char *buf,
                                size_t len);

// `F(a, b; c; z)`; `side` selects the limit onto the cut for real `z >= 1`.
int32_t hgfasym_hgf_eval(const struct HgfasymValue *a,
                         const struct HgfasymValue *b,
                         const struct HgfasymValue *c,
                         const struct HgfasymValue *z,
                         int32_t side,
                         uint32_t bits,
                         struct HgfasymValue **out);

// A case with rates `e1 = e1_num/e1_den` and so on.
int32_t hgfasym_case_new(const struct HgfasymValue *a0,
                         const struct HgfasymValue *b0,
                         const struct HgfasymValue *c0,
                         int64_t e1_num,
                         int64_t e1_den,
                         int64_t e2_num,
                         int64_t e2_den,
                         int64_t e3_num,
                         int64_t e3_den,
                         const struct HgfasymValue *lambda,
                         uint32_t bits,
                         struct HgfasymCase **out);

void hgfasym_case_free(struct HgfasymCase *case_);

// The expansion `method` (for example `"ac-leading"` or `"ab-auto"`) at `z`.
int32_t hgfasym_ae_eval(const struct HgfasymCase *case_,
                        const char *method,
                        const struct HgfasymValue *z,
                        struct HgfasymValue **out);

// Reference value of the case at `z`, approaching real `z >= 1` from below the cut.
int32_t hgfasym_case_reference(const struct HgfasymCase *case_,
                               const struct HgfasymValue *z,
                               struct HgfasymValue **out);

// `100 |1 - approx/reference|`.
int32_t hgfasym_relative_error(const struct HgfasymValue *approx,
                               const struct HgfasymValue *reference,
                               double *out);

// Partition function of `p` particles on `n` sites with `t` traps, by the closed form.
int32_t hgfasym_partition(uint64_t n,
                          uint64_t t,
                          uint64_t p,
                          int64_t zeta_num,
                          int64_t zeta_den,
                          uint32_t bits,
                          struct HgfasymValue **out);

// The same partition function as an exact fraction `num/den` written to `buf`.
int32_t hgfasym_partition_exact(uint64_t n,
                                uint64_t t,
                                uint64_t p,
                                int64_t zeta_num,
                                int64_t zeta_den,
                                char *buf,
                                size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HGFASYM_H */
