#ifndef SSDEC_SSDEC_H
#define SSDEC_SSDEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SSDEC_BUILDING_LIBRARY)
#define SSDEC_API __declspec(dllexport)
#else
#define SSDEC_API __declspec(dllimport)
#endif
#else
#define SSDEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssdec_status {
    SSDEC_OK = 0,
    /* Malformed argument, spec, or configuration. */
    SSDEC_ERR_INVALID_ARGUMENT = 1,
    /* File could not be read or written. */
    SSDEC_ERR_IO = 2,
    /* Syndrome not in the column space of the check matrix. */
    SSDEC_ERR_INCONSISTENT = 3,
    SSDEC_ERR_RUNTIME = 4
} ssdec_status;

typedef enum ssdec_side { SSDEC_SIDE_Z = 0, SSDEC_SIDE_X = 1 } ssdec_side;

/* Message for the last failed call on this thread; empty if none. */
SSDEC_API const char *ssdec_last_error(void);
SSDEC_API const char *ssdec_version(void);

/* ---- codes ---- */

typedef struct ssdec_code ssdec_code;

/* Marks an unknown or infinite distance in ssdec_code_params. */
#define SSDEC_DISTANCE_UNKNOWN UINT64_MAX
#define SSDEC_DISTANCE_INFINITE (UINT64_MAX - 1)

typedef struct ssdec_code_params {
    uint64_t n;
    uint64_t k;
    uint64_t dz;
    uint64_t dx;
    uint64_t hx_row_weight;
    uint64_t hx_col_weight;
    uint64_t hz_row_weight;
    uint64_t hz_col_weight;
    uint64_t x_checks;
    uint64_t z_checks;
    uint64_t x_metachecks;
    uint64_t z_metachecks;
    int has_x_metachecks;
    int has_z_metachecks;
} ssdec_code_params;

SSDEC_API ssdec_status ssdec_code_toric(unsigned D, unsigned i, unsigned L, ssdec_code **out);
/* 4D hypergraph product of a classical check matrix file. */
SSDEC_API ssdec_status ssdec_code_hgp4d(const char *path, ssdec_code **out);
SSDEC_API ssdec_status ssdec_code_hgp2d(const char *path_a, const char *path_b, ssdec_code **out);
/* "toric:D=3,i=2", "toric3d", "hgp4d:PATH" or "hgp2d:A,B"; L is ignored by the hgp families. */
SSDEC_API ssdec_status ssdec_code_from_spec(const char *spec, unsigned L, ssdec_code **out);
SSDEC_API void ssdec_code_free(ssdec_code *code);

SSDEC_API ssdec_status ssdec_code_get_params(const ssdec_code *code, ssdec_code_params *out);
/* Copies the name into buf (truncating, always terminated) and reports the full length. */
SSDEC_API ssdec_status ssdec_code_name(const ssdec_code *code, char *buf, size_t len, size_t *needed);
/* One "name: ok|FAILED" line per invariant; *all_ok is 1 iff every invariant holds. */
SSDEC_API ssdec_status ssdec_code_invariant_report(const ssdec_code *code, char *buf, size_t len, size_t *needed,
                                                   int *all_ok);
SSDEC_API ssdec_status ssdec_code_export(const ssdec_code *code, const char *dir);
SSDEC_API ssdec_status ssdec_code_brute_force_distance(const ssdec_code *code, ssdec_side side, uint64_t *out);

/* ---- decoding ---- */

typedef struct ssdec_decoder ssdec_decoder;

typedef struct ssdec_decoder_options {
    ssdec_side side;
    /* "tanh", "jacobian" or "minsum[:alpha]". NULL selects jacobian. */
    const char *bp;
    unsigned max_iters;
    /* "none", "0", "exhaustive[:w]" or "sweep[:lambda]". NULL selects exhaustive:10. */
    const char *osd;
    int metachecks;
    int two_stage;
    double p_data;
    double p_meas;
} ssdec_decoder_options;

SSDEC_API void ssdec_decoder_options_default(ssdec_decoder_options *opts);
SSDEC_API ssdec_status ssdec_decoder_new(const ssdec_code *code, const ssdec_decoder_options *opts,
                                         ssdec_decoder **out);
SSDEC_API void ssdec_decoder_free(ssdec_decoder *dec);
SSDEC_API size_t ssdec_decoder_syndrome_length(const ssdec_decoder *dec);
SSDEC_API size_t ssdec_decoder_data_length(const ssdec_decoder *dec);

/* Decodes one noisy syndrome (one byte per bit, 0 or 1). data_correction holds
 * ssdec_decoder_data_length bytes, meas_correction ssdec_decoder_syndrome_length bytes. */
SSDEC_API ssdec_status ssdec_decoder_decode(ssdec_decoder *dec, const uint8_t *syndrome, uint8_t *data_correction,
                                            uint8_t *meas_correction, int *bp_converged);

/* ---- simulation ---- */

typedef struct ssdec_sim_config ssdec_sim_config;

SSDEC_API ssdec_status ssdec_sim_config_new(ssdec_sim_config **out);
SSDEC_API void ssdec_sim_config_free(ssdec_sim_config *cfg);
/* Keys: code, L, p, p_meas, rounds, trials, seed, workers, osd, bp, max_iters, metachecks
 * (auto|on|off), two_stage (0|1), side (Z|X). Lists are comma separated; p also accepts
 * start:stop:step. Unknown keys and malformed values are rejected. */
SSDEC_API ssdec_status ssdec_sim_config_set(ssdec_sim_config *cfg, const char *key, const char *value);

typedef void (*ssdec_row_callback)(const char *csv_line, void *user);

/* Runs the campaign and appends rows to out_csv (header written for a new file). Rows already
 * present with the same key are skipped. out_csv may be NULL. */
SSDEC_API ssdec_status ssdec_simulate(const ssdec_sim_config *cfg, const char *out_csv, ssdec_row_callback on_row,
                                      void *user);

/* ---- analysis and experiments ---- */

/* Reads a campaign CSV and writes the analysis JSON (stdout when out_json is NULL). */
SSDEC_API ssdec_status ssdec_analyze(const char *in_csv, const char *out_json, size_t bootstrap);

/* ls lists the string lengths; bp is a variant string as for the decoder. out NULL means stdout. */
SSDEC_API ssdec_status ssdec_experiment_bp_locality(unsigned L, double p, unsigned max_iters, const unsigned *ls,
                                                    size_t n_ls, const char *bp, const char *out);
/* Grid x_min, x_min + step, ... <= x_max; smoothed averages the error over +-0.5. */
SSDEC_API ssdec_status ssdec_experiment_underflow(double x_min, double x_max, double step, int smoothed,
                                                  const char *out);
SSDEC_API ssdec_status ssdec_experiment_half_cube_census(const unsigned *Ls, size_t n_L, const double *ps,
                                                         size_t n_p, size_t trials, uint64_t seed,
                                                         unsigned max_iters, const char *out);

#ifdef __cplusplus
}
#endif

#endif
