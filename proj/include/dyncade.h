/* dyncade — dynamic first-order query evaluation over colored graphs.
 *
 * C API of the shared library. All objects are opaque handles; every
 * function returns a dyncade_status, with outputs through pointers. On
 * failure, dyncade_last_error() returns a thread-local message and
 * dyncade_last_error_line()/_col() carry source positions for parse errors.
 *
 * Threading: one writer at a time per handle; reads must not overlap an
 * update of the same engine. Handles may move between threads.
 */
#ifndef DYNCADE_H
#define DYNCADE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dyncade_graph dyncade_graph;
typedef struct dyncade_query dyncade_query;
typedef struct dyncade_engine dyncade_engine;
typedef struct dyncade_cursor dyncade_cursor;

typedef enum dyncade_status {
    DYNCADE_OK = 0,
    DYNCADE_ERR_MISSING_VERTEX,
    DYNCADE_ERR_DUPLICATE_VERTEX,
    DYNCADE_ERR_DUPLICATE_EDGE,
    DYNCADE_ERR_MISSING_EDGE,
    DYNCADE_ERR_SELF_LOOP,
    DYNCADE_ERR_DEGREE_EXCEEDED,
    DYNCADE_ERR_SYNTAX,
    DYNCADE_ERR_UNBOUND_VARIABLE,
    DYNCADE_ERR_DUPLICATE_NAME,
    DYNCADE_ERR_COMPONENT_MISMATCH,
    DYNCADE_ERR_RADIUS_EXCEEDED,
    DYNCADE_ERR_TAU_CLASH,
    DYNCADE_ERR_NONCONTIGUOUS_GROUPS,
    DYNCADE_ERR_MIXED_CLAUSE_RADII,
    DYNCADE_ERR_ARITY_MISMATCH,
    DYNCADE_ERR_STALE_CURSOR,
    DYNCADE_ERR_RADIUS_TOO_LARGE,
    DYNCADE_ERR_TUPLE_NOT_IN_LIST,
    DYNCADE_ERR_DUPLICATE_TUPLE,
    DYNCADE_ERR_MISSING_LEAF_COUNT,
    DYNCADE_ERR_INVALID_ARGUMENT,
    DYNCADE_ERR_IO,
    DYNCADE_ERR_INTERNAL
} dyncade_status;

typedef enum dyncade_mode {
    DYNCADE_MODE_LOW_DEGREE = 0,
    DYNCADE_MODE_BOUNDED_DEGREE = 1
} dyncade_mode;

const char* dyncade_last_error(void);
int dyncade_last_error_line(void);
int dyncade_last_error_col(void);
const char* dyncade_status_name(dyncade_status s);

/* --- graphs ------------------------------------------------------------ */

dyncade_status dyncade_graph_new_bounded(uint32_t degree_cap, dyncade_graph** out);
dyncade_status dyncade_graph_new_low_degree(double C, double eps, dyncade_graph** out);
/* Text format: lines "v <id> [c1,c2]" and "e <u> <v>"; '#' comments. */
dyncade_status dyncade_graph_parse(const char* text, uint32_t degree_cap, dyncade_graph** out);
dyncade_status dyncade_graph_parse_low_degree(const char* text, double C, double eps,
                                              dyncade_graph** out);
void dyncade_graph_free(dyncade_graph* g);

dyncade_status dyncade_graph_add_vertex(dyncade_graph* g, uint32_t id, const char* colors_csv);
dyncade_status dyncade_graph_remove_vertex(dyncade_graph* g, uint32_t id);
dyncade_status dyncade_graph_add_edge(dyncade_graph* g, uint32_t u, uint32_t v);
dyncade_status dyncade_graph_remove_edge(dyncade_graph* g, uint32_t u, uint32_t v);
dyncade_status dyncade_graph_relabel(dyncade_graph* g, uint32_t id, const char* colors_csv);
/* One update-stream record: "+v 3 Red", "-e 1 2", "!v 4 Blue", ... */
dyncade_status dyncade_graph_apply_line(dyncade_graph* g, const char* line);

dyncade_status dyncade_graph_vertex_count(const dyncade_graph* g, uint64_t* out);
dyncade_status dyncade_graph_edge_count(const dyncade_graph* g, uint64_t* out);
dyncade_status dyncade_graph_max_degree(const dyncade_graph* g, uint32_t* out);

/* --- queries ------------------------------------------------------------ */

/* Parses and validates the s-expression query language. */
dyncade_status dyncade_query_parse(const char* text, dyncade_query** out);
void dyncade_query_free(dyncade_query* q);
dyncade_status dyncade_query_arity(const dyncade_query* q, uint32_t* out);
dyncade_status dyncade_query_sentence_count(const dyncade_query* q, uint32_t* out);
/* Borrowed pointer, valid while the query lives. */
dyncade_status dyncade_query_sentence_name(const dyncade_query* q, uint32_t index,
                                           const char** out);
dyncade_status dyncade_query_color_count(const dyncade_query* q, uint32_t* out);
dyncade_status dyncade_query_color_name(const dyncade_query* q, uint32_t index, const char** out);

/* --- engines ------------------------------------------------------------ */

/* Copies the graph; later mutations must go through dyncade_engine_apply*. */
dyncade_status dyncade_engine_new(const dyncade_graph* g, const dyncade_query* q, dyncade_mode mode,
                                  dyncade_engine** out);
void dyncade_engine_free(dyncade_engine* e);

dyncade_status dyncade_engine_apply(dyncade_engine* e, const char* update_line);
dyncade_status dyncade_engine_add_vertex(dyncade_engine* e, uint32_t id, const char* colors_csv);
dyncade_status dyncade_engine_remove_vertex(dyncade_engine* e, uint32_t id);
dyncade_status dyncade_engine_add_edge(dyncade_engine* e, uint32_t u, uint32_t v);
dyncade_status dyncade_engine_remove_edge(dyncade_engine* e, uint32_t u, uint32_t v);
dyncade_status dyncade_engine_relabel(dyncade_engine* e, uint32_t id, const char* colors_csv);

dyncade_status dyncade_engine_version(const dyncade_engine* e, uint64_t* out);
/* Borrowed view of the engine's graph (for oracle comparisons). */
dyncade_status dyncade_engine_graph(const dyncade_engine* e, const dyncade_graph** out);

/* Boolean answer; requires query arity 0. */
dyncade_status dyncade_engine_check(const dyncade_engine* e, int* out);
dyncade_status dyncade_engine_check_sentence(const dyncade_engine* e, const char* name, int* out);
dyncade_status dyncade_engine_count(const dyncade_engine* e, int64_t* out);
dyncade_status dyncade_engine_test(const dyncade_engine* e, const uint32_t* tuple, uint32_t arity,
                                   int* out);

dyncade_status dyncade_cursor_open(const dyncade_engine* e, dyncade_cursor** out);
/* Writes the next answer into buf (query arity entries). *done = 1 when
 * exhausted (buf untouched). */
dyncade_status dyncade_cursor_next(dyncade_cursor* c, uint32_t* buf, int* done);
void dyncade_cursor_free(dyncade_cursor* c);

/* --- brute-force oracle -------------------------------------------------- */

dyncade_status dyncade_oracle_count(const dyncade_graph* g, const dyncade_query* q, int64_t* out);
dyncade_status dyncade_oracle_check_sentence(const dyncade_graph* g, const dyncade_query* q,
                                             const char* name, int* out);
/* All answers as a flat array of n_tuples * arity ids, lexicographic.
 * Free with dyncade_tuples_free. */
dyncade_status dyncade_oracle_answers(const dyncade_graph* g, const dyncade_query* q,
                                      uint32_t** out, uint64_t* n_tuples);
void dyncade_tuples_free(uint32_t* tuples);

#ifdef __cplusplus
}
#endif

#endif /* DYNCADE_H */
