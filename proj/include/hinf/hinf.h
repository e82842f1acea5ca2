/* C interface to the hinf library. All objects are opaque handles; every
 * fallible call returns an hinf_status and leaves a message for
 * hinf_last_error() on the calling thread. */
#ifndef HINF_H
#define HINF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define HINF_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define HINF_API __attribute__((visibility("default")))
#else
#  define HINF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hinf_status {
    HINF_OK = 0,
    HINF_INVALID_ARGUMENT = 1,
    HINF_PARSE = 2,
    HINF_RESOURCE_CAP = 3,
    HINF_OUT_OF_WINDOW = 4,
    HINF_NOT_A_CYCLE = 5,
    HINF_INFEASIBLE = 6,
    HINF_LOCALITY_VIOLATION = 7,
    HINF_IO = 8,
    HINF_INTERNAL = 9
} hinf_status;

typedef struct hinf_presentation hinf_presentation;
typedef struct hinf_ball hinf_ball;
typedef struct hinf_rips hinf_rips;

HINF_API const char* hinf_version(void);

/* Message from the last failed call on this thread; "" after a success. */
HINF_API const char* hinf_last_error(void);

/* Strings returned through char** out-parameters are freed with this. */
HINF_API void hinf_string_free(char* s);

/* Presentations: text format ("gens a b\nrelators ...\nstrategy ...") or a
 * builtin name (Z, Z2, F2, F3, surface2). */
HINF_API hinf_status hinf_presentation_parse(const char* text, hinf_presentation** out);
HINF_API hinf_status hinf_presentation_builtin(const char* name, hinf_presentation** out);
HINF_API void hinf_presentation_free(hinf_presentation* p);
HINF_API hinf_status hinf_presentation_canonical_text(const hinf_presentation* p, char** out);
HINF_API hinf_status hinf_presentation_hash(const hinf_presentation* p, uint64_t* out);
/* Reduces a word (presentation symbols, ' for inverse) to its normal form. */
HINF_API hinf_status hinf_canonicalize(const hinf_presentation* p, const char* word, char** out);

/* Balls in the Cayley graph. vertex_cap 0 means the default cap. */
HINF_API hinf_status hinf_ball_enumerate(const hinf_presentation* p, int radius, size_t vertex_cap, hinf_ball** out);
HINF_API void hinf_ball_free(hinf_ball* b);
HINF_API hinf_status hinf_ball_size(const hinf_ball* b, size_t* out);
HINF_API hinf_status hinf_ball_sphere_size(const hinf_ball* b, int n, size_t* out);
/* Word-metric length of `word`; HINF_OUT_OF_WINDOW if it lies outside the ball. */
HINF_API hinf_status hinf_ball_distance(const hinf_ball* b, const char* word, int* out);

/* Rips complexes on a ball. closed != 0 selects d <= t instead of d < t. */
HINF_API hinf_status hinf_rips_build(const hinf_ball* b, int t, int max_dim, int closed, hinf_rips** out);
HINF_API void hinf_rips_free(hinf_rips* r);
HINF_API hinf_status hinf_rips_simplex_count(const hinf_rips* r, int dim, size_t* out);
HINF_API hinf_status hinf_rips_betti(const hinf_rips* r, int dim, uint32_t p, size_t* out);
/* Rank of H_i(Complement(m)) -> H_i(Complement(n)) over GF(p), for n < m. */
HINF_API hinf_status hinf_rips_induced_map_rank(const hinf_rips* r, int i, int m, int n, int margin, uint32_t p,
                                                size_t* out);

/* Space-separated command names. */
HINF_API const char* hinf_commands(void);
/* The fully defaulted config of a command, as a JSON object. */
HINF_API hinf_status hinf_default_config(const char* command, char** config_json);
/* Runs a command with a JSON config object and returns the JSON report. */
HINF_API hinf_status hinf_run(const char* command, const char* config_json, char** report_json);
/* The rank matrix of a tower report as CSV. */
HINF_API hinf_status hinf_tower_csv(const char* report_json, char** csv);

#ifdef __cplusplus
}
#endif

#endif
