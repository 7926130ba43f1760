#ifndef VARFRAC_VARFRAC_H
#define VARFRAC_VARFRAC_H

#include <stddef.h>

#if defined(VARFRAC_BUILDING)
#define VF_API __attribute__((visibility("default")))
#else
#define VF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vf_status {
    VF_OK = 0,
    VF_E_IO = 1,
    VF_E_PARSE,
    VF_E_VALIDATION,
    VF_E_EVALUATION,
    VF_E_HYPOTHESIS,
    VF_E_INADMISSIBLE,
    VF_E_BRACKET_FAILURE,
    VF_E_GRADING_OVERFLOW,
    VF_E_EMPTY_ZERO_SET,
    VF_E_DEGENERATE_DICTIONARY,
    VF_E_ESCAPE_FAILURE,
    VF_E_PATH_COLLAPSE,
    VF_E_BOUNDARY_TRAP,
    VF_E_SEARCH_EXHAUSTED,
    VF_E_NOT_CONVERGED,
    VF_E_ARGUMENT,
    VF_E_INTERNAL = 99
} vf_status;

/* Opaque handles. */
typedef struct vf_config vf_config;
typedef struct vf_problem vf_problem;

typedef struct vf_energy_parts {
    double kinetic;
    double potential;
    double source_p;
    double source_k;
    double total;
} vf_energy_parts;

typedef struct vf_run_options {
    const double* lambdas; /* sweep; NULL selects 1, 10, 100, 1000 */
    size_t lambda_count;
    int count;             /* multi; <= 0 selects 3 */
    const char* out_dir;   /* NULL selects the config's output directory */
    int write_files;       /* nonzero writes CSV artifacts */
    int profile;           /* nonzero adds timings to the report */
    const char* function;  /* norm/energy test function u(x); NULL selects a centred hat */
} vf_run_options;

VF_API const char* vf_version(void);
VF_API const char* vf_status_name(vf_status status);

/* Message of the last failed call on this thread; "" when none. */
VF_API const char* vf_last_error(void);

/* 0 success, 1 validation failure, 2 solver non-convergence. */
VF_API int vf_exit_code(vf_status status);

VF_API void vf_run_options_init(vf_run_options* options);

VF_API vf_status vf_config_load(const char* path, vf_config** out);
VF_API vf_status vf_config_parse(const char* json_text, vf_config** out);
VF_API void vf_config_free(vf_config* config);
VF_API vf_status vf_config_set_lambda(vf_config* config, double lambda);
VF_API vf_status vf_config_set_sources(vf_config* config, double alpha, double beta);
/* Normalized config as JSON; release with vf_string_free. */
VF_API vf_status vf_config_to_json(const vf_config* config, char** json_out);

/* Runs check | norm | energy | geometry | solve | sweep | multi. The report
 * is returned even on failure (with an "error" member) whenever the command
 * got far enough to produce one; release with vf_string_free. */
VF_API vf_status vf_run(const vf_config* config, const char* command,
                        const vf_run_options* options, char** json_out);

VF_API void vf_string_free(char* s);

/* Discretized problem: grid, exponents and the cached kernel quadrature. */
VF_API vf_status vf_problem_create(const vf_config* config, vf_problem** out);
VF_API void vf_problem_free(vf_problem* problem);
/* Number of interior unknowns, N - 1. */
VF_API size_t vf_problem_unknowns(const vf_problem* problem);
VF_API vf_status vf_problem_node(const vf_problem* problem, size_t index, double* x);
VF_API vf_status vf_energy(const vf_problem* problem, const double* u, size_t n,
                           vf_energy_parts* out);
/* grad has n entries; nonsmooth (may be NULL) receives the non-smooth-source flag. */
VF_API vf_status vf_gradient(const vf_problem* problem, const double* u, size_t n,
                             double* grad, int* nonsmooth);

#ifdef __cplusplus
}
#endif

#endif
