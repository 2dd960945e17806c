#ifndef CUBEWCD_H
#define CUBEWCD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CwStatus {
  CW_STATUS_OK = 0,
  CW_STATUS_NULL_POINTER = 1,
  CW_STATUS_INVALID_ARGUMENT = 2,
  CW_STATUS_INVALID_STATE = 3,
  CW_STATUS_IO = 4,
  CW_STATUS_FORMAT = 5,
  CW_STATUS_OUT_OF_RANGE = 6,
  CW_STATUS_LIMIT_EXCEEDED = 7,
  CW_STATUS_INTERNAL = 8,
} CwStatus;

/**
 * A solver result.
 */
typedef struct CwSolution CwSolution;

/**
 * A cube state.
 */
typedef struct CwState CwState;

/**
 * An exact distance table.
 */
typedef struct CwTable CwTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into the library on the same thread.
 */
const char *cw_last_error(void);

/**
 * Frees a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cw_string_free(char *s);

/**
 * Number of reachable cube states as a decimal string.
 */
char *cw_state_space_size(void);

/**
 * A new solved cube.
 */
struct CwState *cw_state_solved(void);

/**
 * The solved cube after applying `moves` (e.g. `"R U f"`).
 *
 * # Safety
 * `moves` must be a NUL-terminated string; `out` must be writable.
 */
enum CwStatus cw_state_from_moves(const char *moves, struct CwState **out);

/**
 * Decodes a 26-digit hex state key.
 *
 * # Safety
 * `hex` must be a NUL-terminated string; `out` must be writable.
 */
enum CwStatus cw_state_from_key_hex(const char *hex, struct CwState **out);

/**
 * Applies `moves` to `state` in place.
 *
 * # Safety
 * `state` must be a live handle; `moves` a NUL-terminated string.
 */
enum CwStatus cw_state_apply_moves(struct CwState *state, const char *moves);

/**
 * True when `state` is solved. NULL counts as not solved.
 *
 * # Safety
 * `state` must be NULL or a live handle.
 */
bool cw_state_is_solved(const struct CwState *state);

/**
 * Canonical key of `state` as 26 hex digits; free with `cw_string_free`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CwStatus cw_state_key_hex(const struct CwState *state, char **out);

/**
 * # Safety
 * `state` must be NULL or a live handle, freed once.
 */
void cw_state_free(struct CwState *state);

/**
 * Builds the table of all states within `depth` moves of solved.
 *
 * # Safety
 * `out` must be writable.
 */
enum CwStatus cw_table_build(uint8_t depth, struct CwTable **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CwStatus cw_table_load(const char *path, struct CwTable **out);

/**
 * # Safety
 * `table` must be a live handle; `path` a NUL-terminated string.
 */
enum CwStatus cw_table_save(const struct CwTable *table, const char *path);

/**
 * Number of stored states; 0 for NULL.
 *
 * # Safety
 * `table` must be NULL or a live handle.
 */
size_t cw_table_len(const struct CwTable *table);

/**
 * Depth the table was built to; 0 for NULL.
 *
 * # Safety
 * `table` must be NULL or a live handle.
 */
uint8_t cw_table_max_depth(const struct CwTable *table);

/**
 * Exact distance of `state`. Returns `OutOfRange` when the state lies
 * beyond the table.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum CwStatus cw_table_distance(const struct CwTable *table,
                                const struct CwState *state,
                                uint8_t *out);

/**
 * # Safety
 * `table` must be NULL or a live handle, freed once.
 */
void cw_table_free(struct CwTable *table);

/**
 * WCD value of `state` over the table distance. `policy` is `"uniform"`,
 * `"boltzmann[:T]"`, `"mlp:PATH"` or NULL for uniform.
 *
 * # Safety
 * Handles must be live; `policy` NULL or NUL-terminated; `out` writable.
 */
enum CwStatus cw_wcd(const struct CwTable *table,
                     const struct CwState *state,
                     uint32_t k,
                     double mu,
                     const char *policy,
                     double *out);

/**
 * Runs A* from `state`. `max_nodes == 0` and `max_time_s <= 0` select
 * the default limits.
 *
 * # Safety
 * Handles must be live; `policy` NULL or NUL-terminated; `out` writable.
 */
enum CwStatus cw_solve(const struct CwTable *table,
                       const struct CwState *state,
                       uint32_t k,
                       double mu,
                       const char *policy,
                       uint64_t max_nodes,
                       double max_time_s,
                       struct CwSolution **out);

/**
 * Move count of the solution; 0 for NULL.
 *
 * # Safety
 * `sol` must be NULL or a live handle.
 */
size_t cw_solution_length(const struct CwSolution *sol);

/**
 * Closed states when the search ended; 0 for NULL.
 *
 * # Safety
 * `sol` must be NULL or a live handle.
 */
size_t cw_solution_searched_nodes(const struct CwSolution *sol);

/**
 * The moves, space separated; free with `cw_string_free`.
 *
 * # Safety
 * `sol` must be a live handle; `out` writable.
 */
enum CwStatus cw_solution_moves(const struct CwSolution *sol, char **out);

/**
 * # Safety
 * `sol` must be NULL or a live handle, freed once.
 */
void cw_solution_free(struct CwSolution *sol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBEWCD_H */
