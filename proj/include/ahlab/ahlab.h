/* C API for the ahlab shared library.
 *
 * Opaque handles + integer status codes. Points are passed as interleaved
 * (re, im) doubles, 2n values for a point of C^n. Every function that can
 * fail takes a trailing int* status (may be NULL); a human-readable message
 * for the most recent failure on the calling thread is available from
 * ahlab_last_error().
 */
#ifndef AHLAB_AHLAB_H_
#define AHLAB_AHLAB_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define AHLAB_API __declspec(dllexport)
#else
#define AHLAB_API __attribute__((visibility("default")))
#endif

enum {
  AHLAB_OK = 0,
  AHLAB_E_CERTIFICATION = 1,
  AHLAB_E_CONFIG = 2,
  AHLAB_E_DOMAIN = 3,
  AHLAB_E_DEGENERATE = 4,
  AHLAB_E_NO_ADMISSIBLE_W = 5,
  AHLAB_E_RESOLUTION = 6,
  AHLAB_E_BUDGET = 7,
  AHLAB_E_NO_ADMISSIBLE_PATH = 8,
  AHLAB_E_UNSUPPORTED = 9,
  AHLAB_E_INVALID_ARG = 10,
  AHLAB_E_INTERNAL = 11
};

typedef struct ahlab_model ahlab_model;
typedef struct ahlab_field ahlab_field;

AHLAB_API const char* ahlab_version(void);
AHLAB_API const char* ahlab_last_error(void);

/* kind: "torus" or "flat". ball_radius ignored for the torus. */
AHLAB_API ahlab_model* ahlab_model_create(const char* kind, int n,
                                          double ball_radius, int* status);
AHLAB_API void ahlab_model_destroy(ahlab_model* m);
AHLAB_API int ahlab_model_dim(const ahlab_model* m);

AHLAB_API double ahlab_gk_distance(const ahlab_model* m, int k,
                                   const double* x, const double* y,
                                   int* status);
/* Fills out[0..2n-1] with c(z). */
AHLAB_API void ahlab_involution(const ahlab_model* m, const double* z,
                                double* out);

/* Field builders. cutoff_gk = 0 selects the default. */
AHLAB_API ahlab_field* ahlab_field_spheres(const ahlab_model* m, int k,
                                           double D, double cutoff_gk,
                                           int* status);
AHLAB_API ahlab_field* ahlab_field_nonvanishing(const ahlab_model* m, int k,
                                                int* status);
AHLAB_API ahlab_field* ahlab_field_full_lattice(const ahlab_model* m, int k,
                                                double mesh_gk, int* status);
AHLAB_API ahlab_field* ahlab_field_sigma(const ahlab_model* m, int k,
                                         const double* x, int* status);
AHLAB_API ahlab_field* ahlab_field_kappa(const ahlab_field* s, int* status);
AHLAB_API ahlab_field* ahlab_field_symmetrize(const ahlab_field* s,
                                              int* status);
AHLAB_API void ahlab_field_destroy(ahlab_field* s);

/* value: out[0]=re, out[1]=im. gradient: 4n doubles, (re,im) per partial,
 * ordered d/dx_1, d/dy_1, ..., d/dx_n, d/dy_n. */
AHLAB_API void ahlab_field_eval(const ahlab_field* s, const double* z,
                                double* value, int* status);
AHLAB_API void ahlab_field_gradient(const ahlab_field* s, const double* z,
                                    double* grad, int* status);
AHLAB_API double ahlab_field_symmetry_certificate(const ahlab_field* s,
                                                  int grid_per_axis,
                                                  int* status);

/* Serialized flat record text; returns required size (excluding NUL). */
AHLAB_API size_t ahlab_field_serialize(const ahlab_field* s, char* buf,
                                       size_t cap);
AHLAB_API ahlab_field* ahlab_field_parse(const char* text, int* status);

/* AH constants over an ambient grid: out = {C0, C1, C2, Cbar}. */
AHLAB_API void ahlab_ah_report(const ahlab_field* s, int grid_per_axis,
                               double out[4], int* status);
/* eta-transversality; eta = HUGE_VAL when the sublevel is empty. */
AHLAB_API void ahlab_eta(const ahlab_field* s, int grid_per_axis,
                         double epsilon, int restrict_real, double* eta,
                         double* lipschitz_correction, int* status);
/* Real zero-locus components (auto-jittered on degeneracy). */
AHLAB_API void ahlab_real_components(const ahlab_field* s, int grid_per_axis,
                                     int* count, double* min_inradius_g,
                                     int* status);

/* Experiment drivers; config_text is the key-value config format. Return
 * value is the process-style exit code (0 pass, 1 certification failure,
 * 2 config error). */
AHLAB_API int ahlab_run_scaling(const char* config_text, const char* out_dir);
AHLAB_API int ahlab_run_pencil(const char* config_text, const char* out_dir);
AHLAB_API int ahlab_run_invariants(const char* config_text,
                                   const char* out_dir);
AHLAB_API int ahlab_run_sard_demo(const char* config_text, const char* out_dir,
                                  int instances);
/* Canonical config text (defaults when config_text is NULL or empty);
 * returns required size. */
AHLAB_API size_t ahlab_config_canonical(const char* config_text, char* buf,
                                        size_t cap, int* status);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AHLAB_AHLAB_H_ */
