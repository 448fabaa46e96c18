/* Copyright 2026 The vmh Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the vmh library. Handles are opaque; every fallible call
 * returns a vmh_status and leaves a message for vmh_last_error() on the
 * calling thread. Strings are UTF-8. Returned const char* values stay valid
 * while the owning handle lives.
 */
#ifndef VMH_VMH_H_
#define VMH_VMH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(VMH_BUILDING_LIBRARY)
#define VMH_API __attribute__((visibility("default")))
#else
#define VMH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vmh_status {
  VMH_OK = 0,
  VMH_E_INVALID_ARGUMENT,
  VMH_E_IO,
  VMH_E_MALFORMED_RECORD,
  VMH_E_DUPLICATE_ID,
  VMH_E_EMPTY_TEXT,
  VMH_E_INVARIANT_VIOLATION,
  VMH_E_NO_DIFFERENCE,
  VMH_E_NO_QUANTIFIER,
  VMH_E_GENERATION_FAILED,
  VMH_E_VALIDATION_FAILED,
  VMH_E_CLIENT_ERROR,
  VMH_E_MISSING_VECTOR,
  VMH_E_PROVIDER_ERROR,
  VMH_E_DIMENSION_MISMATCH,
  VMH_E_ZERO_VECTOR,
  VMH_E_DEGENERATE_INPUT,
  VMH_E_MISSING_COVARIANCE,
  VMH_E_TOO_FEW_SAMPLES,
  VMH_E_SINGULAR_AFTER_REGULARIZATION,
  VMH_E_EMPTY_INPUT,
  VMH_E_FORMAT_ERROR,
  VMH_E_SCORER_ERROR,
  VMH_E_RANGE_VIOLATION,
  VMH_E_INCOMPATIBLE_DUMPS,
  VMH_E_INTERNAL
} vmh_status;

#define VMH_CATEGORY_COUNT 9

VMH_API const char* vmh_version(void);
VMH_API const char* vmh_status_name(vmh_status s);
/* Message of the last failed call on this thread; "" if none. */
VMH_API const char* vmh_last_error(void);
/* Name of category index 0..VMH_CATEGORY_COUNT-1 ("WordSwap" .. "Other"), or NULL. */
VMH_API const char* vmh_category_name(int category);
VMH_API int vmh_category_index(const char* name); /* -1 if unknown */

/* ---- corpus ---- */
typedef struct vmh_corpus vmh_corpus;

VMH_API vmh_status vmh_corpus_load(const char* path, vmh_corpus** out);
VMH_API vmh_status vmh_corpus_save(const vmh_corpus* c, const char* path);
VMH_API void vmh_corpus_free(vmh_corpus* c);
VMH_API size_t vmh_corpus_size(const vmh_corpus* c);
VMH_API const char* vmh_corpus_name(const vmh_corpus* c);
VMH_API const char* vmh_corpus_hash(const vmh_corpus* c);
/* counts[i] = number of triplets in category i. */
VMH_API void vmh_corpus_composition(const vmh_corpus* c, size_t counts[VMH_CATEGORY_COUNT]);
/* Applies the non-metamorphic swap; applying it to its own output restores the input. */
VMH_API vmh_status vmh_corpus_nonmetamorphic(const vmh_corpus* c, vmh_corpus** out);
VMH_API size_t vmh_corpus_unpaired_count(const vmh_corpus* c);
VMH_API const char* vmh_corpus_unpaired_id(const vmh_corpus* c, size_t i);

/* ---- tagging ---- */
/* label: "Entailment", "Contradiction" or "Neutral". *category receives an index. */
VMH_API vmh_status vmh_tag_pair(const char* s1, const char* s2, const char* label, int* category);
/* Tags every pair record of `in` and writes them with a "category" field to `out`.
 * lexicon_path may be NULL for the bundled lexicon. counts may be NULL. */
VMH_API vmh_status vmh_tag_file(const char* in, const char* out, const char* lexicon_path,
                                size_t counts[VMH_CATEGORY_COUNT]);

/* ---- triplet building ---- */
typedef void (*vmh_failure_fn)(const char* pair_id, vmh_status code, const char* detail, void* user);

typedef struct vmh_build_options {
  uint64_t seed;
  const char* stub_path;    /* recorded generator responses; exclusive with gen_endpoint */
  const char* gen_endpoint; /* HTTP generation endpoint */
  const char* api_key_env;  /* NULL: VMH_GEN_API_KEY */
  uint32_t timeout_ms;      /* 0: 30000 */
  int32_t retries;          /* <0: 2 */
  size_t max_in_flight;     /* 0: 4 */
  const char* corpus_name;  /* NULL: stem of the input path */
  vmh_failure_fn on_failure;
  void* user;
} vmh_build_options;

typedef struct vmh_build_stats {
  size_t attempted;
  size_t built;
  size_t failed;
  size_t skipped;
} vmh_build_stats;

VMH_API void vmh_build_options_init(vmh_build_options* opts);
/* Writes the corpus even when some pairs fail; the caller applies its failure threshold. */
VMH_API vmh_status vmh_build_file(const char* tagged_path, const char* out_path, const vmh_build_options* opts,
                                  vmh_build_stats* stats);

/* ---- embedding providers ---- */
typedef struct vmh_provider vmh_provider;

/* "bow:DIM", "char3:DIM", "file:PATH", "http:URL;model=ID;dim=N[;...]"; a bare http(s) URL also works */
VMH_API vmh_status vmh_provider_create(const char* spec, vmh_provider** out);
VMH_API void vmh_provider_free(vmh_provider* p);
VMH_API const char* vmh_provider_model_id(const vmh_provider* p);
VMH_API size_t vmh_provider_dimension(const vmh_provider* p);
/* Raw (unnormalized) vector into out[0..cap). Fails with DIMENSION_MISMATCH if cap is too small. */
VMH_API vmh_status vmh_provider_embed(vmh_provider* p, const char* text, double* out, size_t cap);
/* Writes a vector file for every distinct corpus text. */
VMH_API vmh_status vmh_provider_export(vmh_provider* p, const vmh_corpus* c, const char* path, int binary,
                                       size_t* count);

/* ---- scorers ---- */
typedef struct vmh_scorer vmh_scorer;

/* "containment", "echo", "cassette:PATH[;...]", "http:URL[;...]" or a bare http(s) URL */
VMH_API vmh_status vmh_scorer_create(const char* spec, vmh_scorer** out);
VMH_API void vmh_scorer_free(vmh_scorer* s);
VMH_API const char* vmh_scorer_id(const vmh_scorer* s);
VMH_API vmh_status vmh_scorer_score(vmh_scorer* s, const char* s1, const char* s2, double* out);

/* ---- evaluation ---- */
typedef struct vmh_report vmh_report;

enum { VMH_ORDER_FORWARD = 1, VMH_ORDER_REVERSE = 2, VMH_ORDER_BOTH = 3 };

typedef struct vmh_eval_options {
  size_t threads;   /* 0: hardware concurrency */
  double eps_scale; /* <=0: 1e-6 */
  int order;        /* VMH_ORDER_* for scorers; 0: forward */
} vmh_eval_options;

VMH_API void vmh_eval_options_init(vmh_eval_options* opts);
/* Methods are providers x metrics (metric marks "CD", "ED", "MD", "BD", "LD", "PD", "MhD"),
 * followed by each scorer in the requested orders. */
VMH_API vmh_status vmh_evaluate(const vmh_corpus* c, vmh_provider* const* providers, size_t n_providers,
                                const char* const* metrics, size_t n_metrics, vmh_scorer* const* scorers,
                                size_t n_scorers, const vmh_eval_options* opts, vmh_report** out);
VMH_API void vmh_report_free(vmh_report* r);
VMH_API const char* vmh_report_corpus_hash(const vmh_report* r);
VMH_API size_t vmh_report_method_count(const vmh_report* r);
VMH_API const char* vmh_report_method_id(const vmh_report* r, size_t i);
VMH_API size_t vmh_report_outcome_count(const vmh_report* r);
/* category: index, or -1 for all. Counts may be NULL. Accuracy is NaN when n == 0. */
VMH_API vmh_status vmh_report_tally(const vmh_report* r, const char* method_id, int category, size_t* n,
                                    size_t* correct, size_t* ties, size_t* errors, double* accuracy);
VMH_API vmh_status vmh_report_save_dump(const vmh_report* r, const char* path);
VMH_API vmh_status vmh_report_load_dump(const char* path, vmh_report** out);
/* Union of reports over the same corpus; INCOMPATIBLE_DUMPS otherwise. */
VMH_API vmh_status vmh_report_merge(const vmh_report* const* reports, size_t n, vmh_report** out);
/* accuracy/distances/summary tables (.csv and .txt) under dir, names prefixed by `prefix` (may be NULL). */
VMH_API vmh_status vmh_report_write_tables(const vmh_report* r, const char* dir, const char* prefix, int plot_data);
/* drop.csv/.txt: one row per method present in both reports. */
VMH_API vmh_status vmh_report_write_drop(const vmh_report* metamorphic, const vmh_report* control, const char* dir);
/* Pretty summary table; valid until the next call on this thread. */
VMH_API const char* vmh_report_summary_text(const vmh_report* r);

#ifdef __cplusplus
}
#endif

#endif /* VMH_VMH_H_ */
