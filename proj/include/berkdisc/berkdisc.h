#ifndef BERKDISC_H
#define BERKDISC_H

/*
 * C interface to the berkdisc library: exact potential theory on finite models of the
 * Berkovich closed unit disc.
 *
 * A scene is an opaque handle holding a validated tree together with named functions,
 * named polynomials and query points. Functions and polynomials are referred to by name,
 * points by the strings "node:<id>" or "edge:<edge id>:<A-offset>".
 *
 * All numbers cross the boundary as strings: "p/q" for rationals, "inf" / "-inf" for the
 * infinities. Composite results are JSON documents using the same encoding.
 *
 * Every call returns a bd_status. On failure the message is available from bd_last_error()
 * (thread local, valid until the next failing call on the same thread). Strings handed out
 * through char** parameters must be released with bd_string_free.
 */

#include <stdint.h>

#if defined(_WIN32)
#define BD_API __declspec(dllexport)
#else
#define BD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bd_scene bd_scene;

typedef enum bd_status {
  BD_OK = 0,
  BD_ERR_PARSE = 1,     /* malformed scene text, point string or number */
  BD_ERR_INVALID = 2,   /* tree or function violates an invariant, or a precondition fails */
  BD_ERR_ARG = 3,       /* null pointer or out-of-range argument */
  BD_ERR_NOT_FOUND = 4, /* unknown function, polynomial, node or edge name */
  BD_ERR_DEFECT = 5,    /* a produced certificate failed its own verification */
  BD_ERR_INTERNAL = 6
} bd_status;

BD_API const char* bd_last_error(void);
BD_API const char* bd_status_name(bd_status s);
BD_API const char* bd_version(void);
BD_API void bd_string_free(char* s);

/* Scene lifecycle. */
BD_API bd_status bd_scene_from_json(const char* text, bd_scene** out);
BD_API bd_status bd_scene_from_file(const char* path, bd_scene** out);
/* Seeded random scene with at most max_nodes nodes; see the README for its contents. */
BD_API bd_status bd_scene_random(uint64_t seed, int max_nodes, bd_scene** out);
BD_API bd_status bd_scene_to_json(const bd_scene* scene, char** out);
BD_API void bd_scene_free(bd_scene* scene);

/* {"nodes":n,"functions":[{"name","valid","mass","violations":[...]}],"polys":[...],"valid":bool} */
BD_API bd_status bd_validate(const bd_scene* scene, char** out_json);

/* Value of a function or of log|f| at a point, as an extended rational string. */
BD_API bd_status bd_eval_function(const bd_scene* scene, const char* fn, const char* point, char** out);
BD_API bd_status bd_eval_poly(const bd_scene* scene, const char* poly, const char* point, char** out);
/* Coordinates {"A","alpha","m"} of a point. */
BD_API bd_status bd_coords(const bd_scene* scene, const char* point, char** out_json);

/* {"atoms":{node: q},"mass":q,"total":q} */
BD_API bd_status bd_laplacian(const bd_scene* scene, const char* fn, char** out_json);
/* Gamma tree of a function; n <= 0 means the limit tree. {"empty":bool,"nodes":[ids],"reach":{edge: q}} */
BD_API bd_status bd_gamma(const bd_scene* scene, const char* fn, long n, char** out_json);

/* sup of log|f| - (1+eps) phi - A. poly may be "1" for the constant polynomial. */
BD_API bd_status bd_sup_norm(const bd_scene* scene, const char* poly, const char* fn, const char* eps, char** out);
/* {"value","shift","raw"} */
BD_API bd_status bd_plus_norm(const bd_scene* scene, const char* poly, const char* fn, char** out_json);
/* {"f": poly string, "roots": {node: e}} */
BD_API bd_status bd_h_generator(const bd_scene* scene, const char* fn, char** out_json);
/* {"rows":[{"node","lelong","exponent"}]} */
BD_API bd_status bd_multiplier(const bd_scene* scene, const char* fn, char** out_json);

/* Certificate {"f","roots","const_log","eps0","verified","trace":[...],"tree":{...}}.
 * step is one of "auto", "base", "type1", "type23", "type4", "segment"; node names the end
 * handled by the single steps that need one and is ignored otherwise. */
BD_API bd_status bd_extend(const bd_scene* scene, const char* fn, const char* point, const char* step,
                           const char* node, char** out_json);
/* Checks a scene polynomial (or "1") as an extension of fn at point for the given eps. */
BD_API bd_status bd_verify(const bd_scene* scene, const char* fn, const char* point, const char* poly,
                           const char* eps, int* ok);

/* {"lower","upper","value","shift","witness","source"} */
BD_API bd_status bd_demailly_bounds(const bd_scene* scene, const char* fn, long level, const char* point,
                                    char** out_json);
/* Single-pole closed form: {"function": {...}, "lelong": q} */
BD_API bd_status bd_demailly_exact(const bd_scene* scene, const char* fn, long level, char** out_json);
BD_API bd_status bd_demailly_bruteforce(const bd_scene* scene, const char* fn, long level, const char* point,
                                        long degree_bound, char** out);
/* {"ok":bool,"rows":[{"node","sum","first","second","ok"}]} */
BD_API bd_status bd_subadditivity(const bd_scene* scene, const char* fn, const char* other, char** out_json);
/* n-th term of the decreasing regularizing sequence: {"root_value","slopes":{edge:q}} */
BD_API bd_status bd_regularize(const bd_scene* scene, const char* fn, long n, char** out_json);
/* Breakpoint table along the path from the root; expressions are documented in the README. */
BD_API bd_status bd_profile(const bd_scene* scene, const char* expression, const char* point, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
