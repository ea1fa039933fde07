#ifndef GCGSIM_H
#define GCGSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcgLearnerKind {
  GCG_LEARNER_KIND_DEFAULT = 0,
  GCG_LEARNER_KIND_UNSET = 1,
} GcgLearnerKind;

typedef enum GcgStatus {
  GCG_STATUS_OK = 0,
  GCG_STATUS_NULL_POINTER = 1,
  GCG_STATUS_INVALID_UTF8 = 2,
  GCG_STATUS_INVALID_ARGUMENT = 3,
  /**
   * The grammar could not be built or a language could not be generated.
   */
  GCG_STATUS_GRAMMAR = 4,
  /**
   * An experiment failed.
   */
  GCG_STATUS_SIMULATION = 5,
  /**
   * A panic was caught at the boundary.
   */
  GCG_STATUS_INTERNAL = 6,
} GcgStatus;

typedef enum GcgWmlMode {
  GCG_WML_MODE_BOTH = 0,
  GCG_WML_MODE_LEARN = 1,
  GCG_WML_MODE_PARSE = 2,
  GCG_WML_MODE_NONE = 3,
} GcgWmlMode;

/**
 * A decoded grammar and the genome it came from.
 */
typedef struct GcgGrammar GcgGrammar;

/**
 * The result of one deterministic parse.
 */
typedef struct GcgParse GcgParse;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null if the last call
 * succeeded. Free with [`gcg_string_free`].
 */
char *gcg_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gcg_string_free(char *s);

/**
 * Builds a grammar from a language name (with optional `-N`, `-Rc`, `-PP`,
 * `-Sc`, `-GWP`, `-COMP` suffixes), `mixed`, or genome text.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out_grammar` a valid pointer.
 */
enum GcgStatus gcg_grammar_new(const char *spec, struct GcgGrammar **out_grammar);

/**
 * # Safety
 * `g` must be null or a handle from [`gcg_grammar_new`], not yet freed.
 */
void gcg_grammar_free(struct GcgGrammar *g);

/**
 * Genome text of the grammar.
 *
 * # Safety
 * `g` must be a live handle and `out_text` a valid pointer.
 */
enum GcgStatus gcg_grammar_genome(const struct GcgGrammar *g, char **out_text);

/**
 * Sentence types the grammar generates, one category string per template.
 *
 * # Safety
 * `g` must be a live handle and `out_text` a valid pointer.
 */
enum GcgStatus gcg_grammar_dump(const struct GcgGrammar *g, char **out_text);

/**
 * Mean total load over the grammar's own sentence types.
 *
 * # Safety
 * `g` must be a live handle and `out_mean` a valid pointer.
 */
enum GcgStatus gcg_grammar_mean_wml(const struct GcgGrammar *g, double *out_mean);

/**
 * Parses a category string such as `NP (S\NP)/NP NP` with the grammar's
 * rules. A failed parse still yields a handle; check
 * [`gcg_parse_success`].
 *
 * # Safety
 * `g` must be a live handle, `categories` a NUL-terminated string and
 * `out_parse` a valid pointer.
 */
enum GcgStatus gcg_parse(const struct GcgGrammar *g,
                         const char *categories,
                         struct GcgParse **out_parse);

/**
 * # Safety
 * `p` must be null or a handle from [`gcg_parse`], not yet freed.
 */
void gcg_parse_free(struct GcgParse *p);

/**
 * # Safety
 * `p` must be a live handle.
 */
bool gcg_parse_success(const struct GcgParse *p);

/**
 * # Safety
 * `p` must be a live handle.
 */
uint32_t gcg_parse_total_wml(const struct GcgParse *p);

/**
 * Copies up to `cap` entries of the per-step load record into `buf` and
 * stores the full record length in `out_len`.
 *
 * # Safety
 * `p` must be a live handle, `buf` valid for `cap` writes (or null when
 * `cap` is 0) and `out_len` a valid pointer.
 */
enum GcgStatus gcg_parse_wml_record(const struct GcgParse *p,
                                    uint32_t *buf,
                                    size_t cap,
                                    size_t *out_len);

/**
 * Logical form of a successful parse, or null after a failed one.
 *
 * # Safety
 * `p` must be a live handle and `out_text` a valid pointer.
 */
enum GcgStatus gcg_parse_lf(const struct GcgParse *p, char **out_text);

/**
 * Step-by-step stack and load table.
 *
 * # Safety
 * `p` must be a live handle and `out_text` a valid pointer.
 */
enum GcgStatus gcg_parse_table(const struct GcgParse *p, char **out_text);

/**
 * Learning-effect trials; writes the JSON-lines report.
 *
 * # Safety
 * `language` must be a NUL-terminated string and `out_jsonl` a valid pointer.
 */
enum GcgStatus gcg_learn_effect(const char *language,
                                enum GcgLearnerKind kind,
                                size_t trials,
                                uint64_t seed,
                                char **out_jsonl);

/**
 * Default-against-unset preference runs; writes the JSON-lines report.
 * Zero `cycles` or `interactions` keep the desk-scale defaults.
 *
 * # Safety
 * `language` must be a NUL-terminated string and `out_jsonl` a valid pointer.
 */
enum GcgStatus gcg_pref_evolution(const char *language,
                                  enum GcgWmlMode wml,
                                  size_t runs,
                                  size_t cycles,
                                  size_t interactions,
                                  uint64_t seed,
                                  char **out_jsonl);

/**
 * Emergence runs from random genomes, optionally seeded with two
 * verb-second SOV speakers; writes the JSON-lines report. Zero `cycles` or
 * `interactions` keep the defaults.
 *
 * # Safety
 * `out_jsonl` must be a valid pointer.
 */
enum GcgStatus gcg_emergence(bool seeded,
                             size_t runs,
                             size_t cycles,
                             size_t interactions,
                             uint64_t seed,
                             char **out_jsonl);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCGSIM_H */
