#ifndef SCOTT_TILER_H
#define SCOTT_TILER_H

/* C interface to the triangle-group line-arrangement analyzer.
 *
 * Every entry point returns an st_status; on anything but ST_OK a
 * human-readable message is available from st_last_error() (thread-local).
 * Strings returned through const char* are owned by the handle that
 * produced them and stay valid until the next call on that handle or its
 * destruction; strings returned through char** are malloc'd and must be
 * released with st_free().
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
  ST_OK = 0,
  ST_CHECK_FAILED = 1,  /* pipeline ran; a verified claim does not hold */
  ST_USAGE_ERROR = 2,   /* bad arguments, unsupported signature, I/O */
  ST_INTERNAL_ERROR = 3 /* consistency failure inside the computation */
} st_status;

typedef struct st_analysis st_analysis;

typedef struct st_options {
  double radius;       /* <= 0: per-signature default */
  int max_wordlen;     /* <= 0: scaled with the radius */
  double tol_point;    /* <= 0: 1e-7 */
  double tol_matrix;   /* <= 0: 1e-9 */
  unsigned long ball_cap; /* 0: 200000 */
  int seed_tile;       /* growth seed face id; < 0: nearest complete tile */
} st_options;

typedef struct st_render_options {
  int width;  /* <= 0: 900 */
  int height; /* <= 0: 900 */
  int show_lines;
  int show_vertices;
  int show_tiles;
  int show_cone_points;
  int show_growth_polygon;
} st_render_options;

/* Library version string, e.g. "1.0.0". */
const char* st_version(void);

/* Message for the most recent failure on this thread ("" when none). */
const char* st_last_error(void);

/* Same failure as a schema-versioned JSON error object ("" when none). */
const char* st_last_error_json(void);

/* Release a char** result. */
void st_free(char* s);

/* Sensible defaults (radius/max_wordlen auto, default tolerances). */
st_options st_default_options(void);
st_render_options st_default_render_options(void);

/* Run the full pipeline for the signature (p,q,r).  ST_OK means the
 * pipeline ran; whether every check passed is st_analysis_exit_code(). */
st_status st_analyze(int p, int q, int r, const st_options* opt, st_analysis** out);
void st_analysis_free(st_analysis* a);

/* Canonical JSON report (schema_version 1); owned by the handle. */
const char* st_analysis_json(st_analysis* a);
/* 0 when every check in the report passed, 1 otherwise. */
int st_analysis_exit_code(const st_analysis* a);
/* SVG render of the arrangement and coloring; owned by the handle. */
const char* st_analysis_svg(st_analysis* a, const st_render_options* ropt);
/* Atomic whole-file writes of the two artifacts. */
st_status st_analysis_write_json(st_analysis* a, const char* path);
st_status st_analysis_write_svg(st_analysis* a, const char* path,
                                const st_render_options* ropt);

/* Order of the word (tokens like "x y^-2") in the triangle group:
 * *order = -1 for infinite order, the finite order otherwise; *trace
 * receives the matrix trace.  Either out pointer may be NULL. */
st_status st_word_order(int p, int q, int r, const char* word, long* order, double* trace);

/* Search for an infinite-order product built from two words.  ST_OK: the
 * witness word is malloc'd into *witness and *trace receives its trace.
 * ST_USAGE_ERROR with a NoWitnessFound message: every candidate was
 * elliptic or parabolic, i.e. the pair does not satisfy the hypothesis. */
st_status st_witness_search(int p, int q, int r, const char* a, const char* b,
                            char** witness, double* trace);

/* Algebra battery over all covered signatures with sorted indices
 * <= max_index; malloc'd JSON into *json, *all_pass set to 0/1. */
st_status st_grid_json(int max_index, char** json, int* all_pass);

/* Atomic whole-file write (temp file + rename). */
st_status st_write_text(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* SCOTT_TILER_H */
