/* Generated by cbindgen from pathgraph-ffi; do not edit by hand. */

#ifndef PATHGRAPH_H
#define PATHGRAPH_H

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Which representation a handle holds (or should be built).
 */
typedef enum pg_mode {
  PG_MODE_SUCCINCT = 0,
  PG_MODE_LEVEL = 1,
} pg_mode;

/**
 * Status codes returned by every entry point.
 */
typedef enum pg_status {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_ARGUMENT = 1,
  PG_STATUS_INVALID_UTF8 = 2,
  PG_STATUS_PARSE_ERROR = 3,
  PG_STATUS_IO_ERROR = 4,
  PG_STATUS_BLOB_ERROR = 5,
  PG_STATUS_INDEX_OUT_OF_RANGE = 6,
  PG_STATUS_INVALID_MODE = 7,
  PG_STATUS_BUFFER_TOO_SMALL = 8,
  PG_STATUS_INTERNAL_ERROR = 9,
} pg_status;

/**
 * Opaque graph handle.
 */
typedef struct pg_graph pg_graph;

/**
 * Builds a representation from a text instance file. `mode` takes a
 * `pg_mode` value; anything else yields `InvalidMode` (the parameter
 * is deliberately a plain integer so garbage from C stays defined).
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid
 * pointer; on `Ok` the handle must eventually go to `pg_free`.
 */
pg_status pg_build_from_file(const char *path, uint32_t mode, pg_graph **out);

/**
 * Loads a serialized representation; the blob tag picks the kind.
 *
 * # Safety
 * As `pg_build_from_file`.
 */
pg_status pg_load_file(const char *path, pg_graph **out);

/**
 * Serializes the handle to a file.
 *
 * # Safety
 * `g` must be a live handle, `path` a valid NUL-terminated string.
 */
pg_status pg_save_file(const pg_graph *g, const char *path);

/**
 * Number of paths (graph vertices).
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
pg_status pg_vertex_count(const pg_graph *g, uint32_t *out);

/**
 * Which representation the handle holds.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
pg_status pg_kind(const pg_graph *g, pg_mode *out);

/**
 * True in `*out` iff vertices `i` and `j` (1-based input indices) are
 * adjacent; a vertex is adjacent to itself.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
pg_status pg_adjacent(const pg_graph *g, uint32_t i, uint32_t j, bool *out);

/**
 * Degree of vertex `i` in `*out`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
pg_status pg_degree(const pg_graph *g, uint32_t i, uint64_t *out);

/**
 * Writes the ascending neighbour list of `i` into `buf` and its length
 * into `*len`. With a null `buf` only the length is reported; with a
 * too-small capacity the length is set and `BufferTooSmall` returned.
 *
 * # Safety
 * `g` must be a live handle, `len` a valid pointer and `buf` valid for
 * `cap` entries when non-null.
 */
pg_status pg_neighbourhood(const pg_graph *g,
                           uint32_t i,
                           uint32_t *buf,
                           size_t cap,
                           size_t *len);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void pg_free(pg_graph *g);

#ifdef __cplusplus
}  // extern "C"
#endif // __cplusplus

#endif  /* PATHGRAPH_H */
