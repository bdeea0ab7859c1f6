/* fusecluster - multimodal document clustering via fused NMF
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API. All functions are thread-compatible: distinct contexts may be
 * used from distinct threads; a single context must not be shared.
 *
 * Every command returns an fc_status. On failure, fc_last_error() holds
 * a human-readable diagnostic valid until the next call on the context.
 */
#ifndef FUSECLUSTER_H
#define FUSECLUSTER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fc_context fc_context;

typedef enum fc_status {
  FC_OK = 0,
  FC_ERR_INTERNAL = 1, /* unexpected failure (bug, resource exhaustion) */
  FC_ERR_CONFIG = 2,   /* bad or missing configuration / arguments      */
  FC_ERR_DATA = 3,     /* unreadable or inconsistent input data         */
  FC_ERR_NUMERIC = 4   /* numerical failure (NMF NaN, degenerate stats) */
} fc_status;

/* Library version as "major.minor.patch". Static storage, never NULL. */
const char* fc_version(void);

/* Context lifecycle. fc_context_new returns NULL only on allocation
 * failure. Contexts hold a key=value configuration, the last error
 * message, and scalar results of the most recent command. */
fc_context* fc_context_new(void);
void fc_context_free(fc_context* ctx);

/* Last error message for this context; "" when the previous call
 * succeeded. Pointer valid until the next API call on this context. */
const char* fc_last_error(const fc_context* ctx);

/* Load a key=value config file ('#' comments, blank lines ignored).
 * Relative paths inside the file resolve against the file's directory.
 * Later fc_config_set calls override loaded values. */
fc_status fc_config_load(fc_context* ctx, const char* path);
fc_status fc_config_set(fc_context* ctx, const char* key, const char* value);

/* Copy the current value of a key into buf (NUL-terminated, truncated
 * to buflen-1 chars). FC_ERR_CONFIG if the key is unset. */
fc_status fc_config_get(const fc_context* ctx, const char* key, char* buf,
                        size_t buflen);

/* Pipeline commands. Each reads its inputs per the configuration and
 * writes its artifacts into out_dir (created if missing). Stage
 * commands (vocab .. evaluate) chain through out_dir and together
 * reproduce fc_run bit-for-bit given the same config and seed. */
fc_status fc_run(fc_context* ctx, const char* out_dir);       /* full pipeline   */
fc_status fc_build_vocab(fc_context* ctx, const char* out_dir);
fc_status fc_train_codebook(fc_context* ctx, const char* out_dir);
fc_status fc_quantize(fc_context* ctx, const char* out_dir);
fc_status fc_fuse(fc_context* ctx, const char* out_dir);
fc_status fc_factorize(fc_context* ctx, const char* out_dir);
fc_status fc_assign(fc_context* ctx, const char* out_dir);
fc_status fc_evaluate(fc_context* ctx, const char* out_dir);

/* Generate a synthetic dataset / run the multi-seed experiment matrix.
 * Both read the synthetic-spec keys from the configuration. */
fc_status fc_synth(fc_context* ctx, const char* out_dir);
fc_status fc_experiment(fc_context* ctx, const char* out_dir);

/* Scalar results of the most recent successful command, e.g. "purity",
 * "zrand" after fc_run/fc_evaluate, or "mean_purity.M", "std_zrand.A"
 * after fc_experiment. FC_ERR_CONFIG if the key is not present. */
fc_status fc_result_double(const fc_context* ctx, const char* key,
                           double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FUSECLUSTER_H */
