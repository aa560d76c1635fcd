#ifndef HYBRIDGATE_H
#define HYBRIDGATE_H

/*
 * C interface to the hybrid-gate simulator. A simulation handle wraps a
 * validated configuration; commands run against it and return CSV text.
 * All functions are thread-safe as long as each handle is used by one
 * thread at a time; error text is thread-local.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hqg_sim hqg_sim;

typedef enum hqg_status {
    HQG_OK = 0,
    HQG_ERROR_CONFIG = 2,  /* bad configuration or arguments */
    HQG_ERROR_NUMERIC = 3, /* simulation failed to produce a trustworthy number */
    HQG_ERROR_INVALID = 4  /* API misuse (null handle or output pointer) */
} hqg_status;

typedef struct hqg_run_options {
    int jobs;         /* sweep worker threads; 0 = hardware concurrency */
    int oracle_check; /* nonzero adds Fock-oracle columns to the truth table */
} hqg_run_options;

/* Library version string, e.g. "1.0.0". */
const char* hqg_version(void);

/* Creates a handle from a config file; a null path gives the defaults. */
hqg_status hqg_sim_create(const char* path, hqg_sim** out_sim);

/* Creates a handle from config text ("key = value" lines). */
hqg_status hqg_sim_create_from_string(const char* text, hqg_sim** out_sim);

void hqg_sim_destroy(hqg_sim* sim);

/* Overrides one numeric key on an existing handle. */
hqg_status hqg_sim_set_number(hqg_sim* sim, const char* key, double value);

/*
 * Runs one of: "truth-table", "sweep", "modes", "validate-linearization".
 * On success *out_csv holds a NUL-terminated buffer that the caller releases
 * with hqg_string_free. options may be null for defaults.
 */
hqg_status hqg_sim_run(const hqg_sim* sim, const char* command,
                       const hqg_run_options* options, char** out_csv);

void hqg_string_free(char* s);

/* Text of the most recent error raised on the calling thread. */
const char* hqg_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* HYBRIDGATE_H */
