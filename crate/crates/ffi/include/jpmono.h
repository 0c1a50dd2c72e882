#ifndef JPMONO_H
#define JPMONO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JpmStatus {
  JPM_STATUS_OK = 0,
  JPM_STATUS_NULL_ARGUMENT = 1,
  JPM_STATUS_INVALID_UTF8 = 2,
  JPM_STATUS_USAGE = 3,
  JPM_STATUS_DOMAIN = 4,
  JPM_STATUS_PANIC = 5,
} JpmStatus;

/**
 * Opaque handle: a validated parameter tuple reduced at one prime.
 */
typedef struct JpmInstance JpmInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *jpm_last_error(void);

/**
 * Builds the tuple for exponents `weights[0..len]` of a primitive N-th root,
 * reduced at the chosen prime above `prime` and embedding.
 *
 * # Safety
 * `weights` must point to `len` readable values and `out` must be writable.
 */
enum JpmStatus jpm_instance_new(uint64_t n_order,
                                const uint64_t *weights,
                                size_t len,
                                uint64_t prime,
                                size_t prime_index,
                                size_t embedding,
                                struct JpmInstance **out);

/**
 * Matrix size of the tuple; 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t jpm_instance_dimension(const struct JpmInstance *h);

/**
 * Runs the defining-relation and rigidity checks; writes a JSON report.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum JpmStatus jpm_instance_verify(const struct JpmInstance *h, uint64_t seed, char **out);

/**
 * Classifies the monodromy image; writes a JSON report.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum JpmStatus jpm_instance_classify(const struct JpmInstance *h, uint64_t seed, char **out);

/**
 * # Safety
 * `h` must be null or a handle from `jpm_instance_new` not yet freed.
 */
void jpm_instance_free(struct JpmInstance *h);

/**
 * Runs a command-line invocation (`argv` excludes the program name) and
 * writes whatever it printed to stdout. Domain errors still produce the JSON
 * error report in `out`.
 *
 * # Safety
 * `argv` must hold `argc` valid C strings and `out` must be writable.
 */
enum JpmStatus jpm_run(size_t argc, const char *const *argv, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void jpm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JPMONO_H */
