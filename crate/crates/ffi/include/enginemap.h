/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ENGINEMAP_H
#define ENGINEMAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EmStatus {
  EM_STATUS_OK = 0,
  EM_STATUS_NULL_POINTER = 1,
  EM_STATUS_INVALID_ARGUMENT = 2,
  // Bad configuration or input data (mapping, repository root, ...).
  EM_STATUS_INPUT_ERROR = 3,
  EM_STATUS_IO = 4,
  EM_STATUS_INTERNAL = 5,
  EM_STATUS_PANIC = 6,
} EmStatus;

typedef enum EmTier {
  EM_TIER_INNER_CORE = 0,
  EM_TIER_OUTER_CORE = 1,
  EM_TIER_PERIPHERY = 2,
} EmTier;

// Heatmap, frequent pairs and tiers for a corpus.
typedef struct EmAggregate EmAggregate;

// A growing set of engine graphs awaiting aggregation.
typedef struct EmCorpus EmCorpus;

// One analysed engine: its subsystem graph and metrics.
typedef struct EmEngine EmEngine;

// Options for [`em_engine_analyse`]. A null pointer means all `false`
// and no extra directories.
typedef struct EmEngineOptions {
  // `;`-separated directory names skipped while scanning, or null.
  const char *exclude_dirs;
  // `;`-separated first-pass search directories relative to the root, or null.
  const char *include_dirs;
  bool strict_resolve;
  bool include_unassigned;
  bool normalize_centrality;
} EmEngineOptions;

typedef struct EmResolutionCounts {
  size_t first_pass;
  size_t second_pass;
  size_t ambiguous;
  size_t unresolved;
} EmResolutionCounts;

// Options for [`em_corpus_aggregate`]. A null pointer means defaults
// (threshold 6, inner core 4, present-only averaging).
typedef struct EmCorpusOptions {
  size_t pair_threshold;
  size_t inner_core_size;
  // Average over all engines instead of only those containing the code.
  bool zero_fill;
} EmCorpusOptions;

typedef struct EmPair {
  uint32_t source;
  uint32_t target;
  size_t count;
  double centrality_sum;
} EmPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *em_last_error(void);

// Three-letter code for a subsystem index, or null if out of range.
// The string is static.
const char *em_subsystem_code(uint32_t index);

// Scans `root`, resolves includes, tags files with the mapping CSV and
// builds the subsystem graph and metrics.
//
// # Safety
// String arguments must be NUL-terminated; `options` may be null and its
// string fields may be null; `out` must be writable. On success `*out`
// owns a handle for [`em_engine_free`].
enum EmStatus em_engine_analyse(const char *name,
                                const char *root,
                                const char *mapping_csv,
                                const struct EmEngineOptions *options,
                                struct EmEngine **out);

// # Safety
// `engine` must be null or a handle from [`em_engine_analyse`] not yet freed.
void em_engine_free(struct EmEngine *engine);

// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_file_count(const struct EmEngine *engine, size_t *out);

// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_resolution_counts(const struct EmEngine *engine,
                                          struct EmResolutionCounts *out);

// Writes whether the subsystem has at least one file in the graph.
//
// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_has_subsystem(const struct EmEngine *engine, uint32_t code, bool *out);

// Distinct predecessor subsystems; 0 for absent subsystems.
//
// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_in_degree(const struct EmEngine *engine, uint32_t code, size_t *out);

// Betweenness centrality; 0 for absent subsystems.
//
// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_betweenness(const struct EmEngine *engine, uint32_t code, double *out);

// Number of distinct file pairs behind the edge `source -> target`.
//
// # Safety
// `engine` must be a live handle; `out` must be writable.
enum EmStatus em_engine_edge_weight(const struct EmEngine *engine,
                                    uint32_t source,
                                    uint32_t target,
                                    size_t *out);

struct EmCorpus *em_corpus_new(void);

// # Safety
// `corpus` must be null or a handle from [`em_corpus_new`] not yet freed.
void em_corpus_free(struct EmCorpus *corpus);

// Copies the engine's subsystem graph into the corpus. Engine names must
// be distinct. The engine handle stays owned by the caller.
//
// # Safety
// Both handles must be live.
enum EmStatus em_corpus_add_engine(struct EmCorpus *corpus, const struct EmEngine *engine);

// # Safety
// `corpus` must be a live handle; `out` must be writable.
enum EmStatus em_corpus_len(const struct EmCorpus *corpus, size_t *out);

// Builds the heatmap, frequent pairs and tiers for the engines added so far.
//
// # Safety
// `corpus` must be a live handle; `options` may be null; `out` must be
// writable. On success `*out` owns a handle for [`em_aggregate_free`].
enum EmStatus em_corpus_aggregate(const struct EmCorpus *corpus,
                                  const struct EmCorpusOptions *options,
                                  struct EmAggregate **out);

// # Safety
// `aggregate` must be null or a handle from [`em_corpus_aggregate`].
void em_aggregate_free(struct EmAggregate *aggregate);

// Number of engines with an edge `source -> target`.
//
// # Safety
// `aggregate` must be a live handle; `out` must be writable.
enum EmStatus em_aggregate_heatmap_count(const struct EmAggregate *aggregate,
                                         uint32_t source,
                                         uint32_t target,
                                         size_t *out);

// # Safety
// `aggregate` must be a live handle; `out` must be writable.
enum EmStatus em_aggregate_pair_count(const struct EmAggregate *aggregate, size_t *out);

// Frequent pair at `index`, in ranked order.
//
// # Safety
// `aggregate` must be a live handle; `out` must be writable.
enum EmStatus em_aggregate_pair(const struct EmAggregate *aggregate,
                                size_t index,
                                struct EmPair *out);

// # Safety
// `aggregate` must be a live handle; `out` must be writable.
enum EmStatus em_aggregate_tier(const struct EmAggregate *aggregate,
                                uint32_t code,
                                enum EmTier *out);

// Unnormalised directed betweenness of a graph with `n` nodes. `edges`
// holds `n_edges` (source, target) pairs flattened; duplicates and
// self-loops are ignored. `out` receives `n` values.
//
// # Safety
// `edges` must point to `2 * n_edges` readable values (or be null when
// `n_edges` is 0); `out` must point to `n` writable doubles.
enum EmStatus em_betweenness(size_t n, const uint32_t *edges, size_t n_edges, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENGINEMAP_H */
