#ifndef GENRED_H
#define GENRED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GenredStatus {
  GENRED_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GENRED_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GENRED_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, number, word or initial-distribution spec.
   */
  GENRED_STATUS_PARSE = 3,
  /**
   * The generator violates the kernel conditions.
   */
  GENRED_STATUS_INVALID_GENERATOR = 4,
  /**
   * Unknown state, symbol or fixture, or mismatched sizes.
   */
  GENRED_STATUS_INVALID_ARGUMENT = 5,
  /**
   * The requested word table exceeds the size limit.
   */
  GENRED_STATUS_SIZE_LIMIT = 6,
  /**
   * The caller's buffer is too short; the required length was written.
   */
  GENRED_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * Irrational or malformed rotation.
   */
  GENRED_STATUS_UNSUPPORTED = 8,
  /**
   * A Rust panic was caught at the boundary.
   */
  GENRED_STATUS_INTERNAL = 99,
} GenredStatus;

typedef enum GenredMode {
  GENRED_MODE_EVENT = 0,
  GENRED_MODE_STATE = 1,
  GENRED_MODE_FULL = 2,
} GenredMode;

/**
 * A generator together with the initial distribution it was loaded with.
 */
typedef struct GenredGenerator GenredGenerator;

typedef struct GenredReduction GenredReduction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *genred_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void genred_string_free(char *s);

/**
 * Parses a generator file. `decimal_tolerance` may be null (decimals are
 * taken exactly) or a number such as `"1/1000000000"`; an empty string
 * selects the default tolerance. The generator is not validated.
 *
 * # Safety
 * String arguments must be null or nul-terminated; `out` must be writable.
 */
enum GenredStatus genred_generator_from_json(const char *json,
                                             const char *decimal_tolerance,
                                             struct GenredGenerator **out);

/**
 * A built-in fixture by name, or `rotation:q/p`.
 *
 * # Safety
 * `name` must be nul-terminated; `out` must be writable.
 */
enum GenredStatus genred_example(const char *name, struct GenredGenerator **out);

/**
 * # Safety
 * `gen` must be a live handle; `out` must be writable.
 */
enum GenredStatus genred_generator_to_json(const struct GenredGenerator *gen, char **out);

/**
 * # Safety
 * `gen` must be null or a handle from this library, not yet freed.
 */
void genred_generator_free(struct GenredGenerator *gen);

/**
 * Number of states, or 0 for a null handle.
 *
 * # Safety
 * `gen` must be null or a live handle.
 */
size_t genred_generator_num_states(const struct GenredGenerator *gen);

/**
 * Number of symbols, or 0 for a null handle.
 *
 * # Safety
 * `gen` must be null or a live handle.
 */
size_t genred_generator_num_symbols(const struct GenredGenerator *gen);

/**
 * Writes whether the generator is valid. If `report` is not null it
 * receives the violation list, one per line (empty when valid).
 *
 * # Safety
 * `gen` must be a live handle; `valid` must be writable; `report` may be null.
 */
enum GenredStatus genred_generator_validate(const struct GenredGenerator *gen,
                                            bool *valid,
                                            char **report);

/**
 * Reduces a valid generator.
 *
 * # Safety
 * `gen` must be a live handle; `out` must be writable.
 */
enum GenredStatus genred_reduce(const struct GenredGenerator *gen,
                                enum GenredMode mode,
                                struct GenredReduction **out);

/**
 * # Safety
 * `red` must be null or a handle from this library, not yet freed.
 */
void genred_reduction_free(struct GenredReduction *red);

/**
 * A new generator handle holding the reduced generator.
 *
 * # Safety
 * `red` must be a live handle; `out` must be writable.
 */
enum GenredStatus genred_reduction_generator(const struct GenredReduction *red,
                                             struct GenredGenerator **out);

/**
 * Reduced state index of every original state. `out_len` always receives
 * the number of original states.
 *
 * # Safety
 * `red` must be a live handle; `buf` must hold `len` entries; `out_len` must be writable.
 */
enum GenredStatus genred_reduction_quotient_map(const struct GenredReduction *red,
                                                size_t *buf,
                                                size_t len,
                                                size_t *out_len);

/**
 * Plain-text reduction report: partitions and the quotient map by name.
 *
 * # Safety
 * `red` must be a live handle; `out` must be writable.
 */
enum GenredStatus genred_reduction_report(const struct GenredReduction *red, char **out);

/**
 * Probability of `word` as `"n/d"`. `initial` is null (the file's initial
 * distribution, else uniform), `"uniform"`, `"state:<name>"` or
 * `"<name>=<p>,.."`. Words are symbol names, concatenated or comma-separated.
 *
 * # Safety
 * `gen` must be a live handle; strings nul-terminated or null where allowed; `out` writable.
 */
enum GenredStatus genred_word_probability(const struct GenredGenerator *gen,
                                          const char *initial_spec,
                                          const char *word,
                                          char **out);

/**
 * Word table up to `max_len`, one `<word> <n/d>` line per word in
 * length-lexicographic order. `size_limit` 0 selects the default cap.
 *
 * # Safety
 * As for [`genred_word_probability`].
 */
enum GenredStatus genred_word_table(const struct GenredGenerator *gen,
                                    const char *initial_spec,
                                    size_t max_len,
                                    uint64_t size_limit,
                                    char **out);

/**
 * Decides whether two generators produce the same process. When they do
 * not and `witness` is not null, it receives a shortest distinguishing word.
 *
 * # Safety
 * Handles must be live; `equivalent` writable; specs and `witness` may be null.
 */
enum GenredStatus genred_equivalent(const struct GenredGenerator *a,
                                    const char *initial_a,
                                    const struct GenredGenerator *b,
                                    const char *initial_b,
                                    bool *equivalent,
                                    char **witness);

/**
 * Causal-state block index of every state.
 *
 * # Safety
 * `gen` must be a live handle; `buf` must hold `len` entries; `out_len` writable.
 */
enum GenredStatus genred_causal_partition(const struct GenredGenerator *gen,
                                          size_t *buf,
                                          size_t len,
                                          size_t *out_len);

/**
 * Block index of every state in the coarsest stable partition.
 *
 * # Safety
 * As for [`genred_causal_partition`].
 */
enum GenredStatus genred_event_partition(const struct GenredGenerator *gen,
                                         size_t *buf,
                                         size_t len,
                                         size_t *out_len);

/**
 * A reproducible sample word of length `n`.
 *
 * # Safety
 * As for [`genred_word_probability`].
 */
enum GenredStatus genred_sample(const struct GenredGenerator *gen,
                                const char *initial_spec,
                                size_t n,
                                uint64_t seed,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENRED_H */
