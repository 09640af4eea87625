/* SPDX-License-Identifier: Apache-2.0 */
#ifndef HBS_HBS_H
#define HBS_HBS_H

/*
 * C interface to the hierarchical block sparse (HBS) library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an hbs_status; on
 * failure hbs_last_error() holds a message for the calling thread until the
 * next failing call. Strings returned through char** are heap-allocated and
 * released with hbs_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HBS_BUILDING_LIBRARY)
#    define HBS_API __declspec(dllexport)
#  else
#    define HBS_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define HBS_API __attribute__((visibility("default")))
#else
#  define HBS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hbs_status {
  HBS_OK = 0,
  HBS_ERR_INVALID_ARGUMENT = 1,
  HBS_ERR_DIMENSION = 2,
  HBS_ERR_CONFIG = 3,
  HBS_ERR_VALIDATION = 4,
  HBS_ERR_IO = 5,
  HBS_ERR_BAD_MAGIC = 6,
  HBS_ERR_BAD_VERSION = 7,
  HBS_ERR_TRUNCATED = 8,
  HBS_ERR_FORMAT = 9,
  HBS_ERR_MISSING_SHAPE = 10,
  HBS_ERR_TIMER_RESOLUTION = 11,
  HBS_ERR_PARSE = 12,
  HBS_ERR_INTERNAL = 13
} hbs_status;

typedef enum hbs_distribution { HBS_DIST_GAUSSIAN = 0, HBS_DIST_UNIFORM = 1 } hbs_distribution;
typedef enum hbs_lowering { HBS_LOWER_CRS = 0, HBS_LOWER_RSC = 1 } hbs_lowering;
typedef enum hbs_report_format { HBS_REPORT_TABLE = 0, HBS_REPORT_PAIRS = 1 } hbs_report_format;

typedef struct hbs_dense hbs_dense;
typedef struct hbs_matrix hbs_matrix;
typedef struct hbs_config hbs_config;
typedef struct hbs_irf_table hbs_irf_table;

typedef struct hbs_shape {
  uint32_t bh;
  uint32_t bw;
} hbs_shape;

typedef struct hbs_level_trace {
  hbs_shape shape;
  uint64_t kept;
  uint64_t pruned;
  uint64_t zero_score_kept;
  double cutoff_score;
} hbs_level_trace;

typedef struct hbs_bench_plan {
  uint64_t m;
  uint64_t k;
  uint64_t n;
  uint32_t reps;
  uint32_t warmup;
  uint64_t seed;
} hbs_bench_plan;

typedef struct hbs_cost_summary {
  uint64_t c_dense;
  double c_sparse;
  double speedup;
  int infinite_speedup;
} hbs_cost_summary;

/* Library */
HBS_API const char* hbs_version(void);
HBS_API const char* hbs_status_name(hbs_status status);
HBS_API const char* hbs_last_error(void);
HBS_API void hbs_string_free(char* s);

/* Dense matrices (DMAT) */
HBS_API hbs_status hbs_dense_create(uint32_t rows, uint32_t cols, const float* values,
                                    hbs_dense** out);
HBS_API hbs_status hbs_dense_generate(uint32_t rows, uint32_t cols, uint64_t seed,
                                      hbs_distribution dist, hbs_dense** out);
HBS_API void hbs_dense_free(hbs_dense* m);
HBS_API uint32_t hbs_dense_rows(const hbs_dense* m);
HBS_API uint32_t hbs_dense_cols(const hbs_dense* m);
HBS_API const float* hbs_dense_data(const hbs_dense* m);
HBS_API hbs_status hbs_dense_read(const char* path, hbs_dense** out);
HBS_API hbs_status hbs_dense_write(const hbs_dense* m, const char* path);
HBS_API hbs_status hbs_dense_matmul(const hbs_dense* a, const hbs_dense* b, hbs_dense** out);
HBS_API hbs_status hbs_max_relative_error(const hbs_dense* actual, const hbs_dense* expected,
                                          double* out);
/* values holds k*c*r*s floats with s fastest. */
HBS_API hbs_status hbs_lower_tensor4d(const float* values, uint32_t k, uint32_t c, uint32_t r,
                                      uint32_t s, hbs_lowering order, hbs_dense** out);

/* Pruning plans: "<bh>x<bw>:<sparsity>,..." */
HBS_API hbs_status hbs_config_parse(const char* spec, hbs_config** out);
HBS_API void hbs_config_free(hbs_config* c);
HBS_API size_t hbs_config_level_count(const hbs_config* c);
HBS_API hbs_status hbs_config_level(const hbs_config* c, size_t index, hbs_shape* shape,
                                    double* sparsity);
/* "<bh>x<bw>,...". *count receives the number parsed; fails with
   HBS_ERR_INVALID_ARGUMENT if it exceeds capacity. */
HBS_API hbs_status hbs_shapes_parse(const char* spec, hbs_shape* out, size_t capacity,
                                    size_t* count);
/* "f,f,..." fractions in [0,1]. */
HBS_API hbs_status hbs_fractions_parse(const char* spec, double* out, size_t capacity,
                                       size_t* count);

/* HBS matrices (HBSF) */
/* trace may be NULL; otherwise it must hold hbs_config_level_count(config) entries. */
HBS_API hbs_status hbs_prune(const hbs_dense* m, const hbs_config* config, hbs_matrix** out,
                             hbs_level_trace* trace);
HBS_API hbs_status hbs_trace_render(const hbs_level_trace* trace, size_t count, char** text);
HBS_API void hbs_matrix_free(hbs_matrix* m);
HBS_API uint32_t hbs_matrix_rows(const hbs_matrix* m);
HBS_API uint32_t hbs_matrix_cols(const hbs_matrix* m);
HBS_API size_t hbs_matrix_level_count(const hbs_matrix* m);
HBS_API double hbs_matrix_density(const hbs_matrix* m);
/* Fails with HBS_ERR_VALIDATION (report in hbs_last_error) when the file
   decodes but its structure is invalid. */
HBS_API hbs_status hbs_matrix_read(const char* path, hbs_matrix** out);
HBS_API hbs_status hbs_matrix_write(const hbs_matrix* m, const char* path);
HBS_API hbs_status hbs_matrix_validate(const hbs_matrix* m, int* passed, char** report);
HBS_API hbs_status hbs_matrix_reconstruct(const hbs_matrix* m, hbs_dense** out);
HBS_API hbs_status hbs_matmul(const hbs_matrix* m, const hbs_dense* b, hbs_dense** out);
HBS_API hbs_status hbs_summary_render(const hbs_matrix* m, char** text);

/* Top-k retention. percentiles are fractions in (0,1]; retained receives
   one value per percentile. */
HBS_API hbs_status hbs_topk_retention(const hbs_dense* original, const hbs_matrix* pruned,
                                      const double* percentiles, size_t count, double* retained);
HBS_API hbs_status hbs_topk_report(const hbs_dense* original, const hbs_matrix* pruned,
                                   const double* percentiles, size_t count,
                                   hbs_report_format format, char** text);

/* Irregularity-factor tables (HBS-IRF v1) and the cost model */
HBS_API hbs_status hbs_irf_read(const char* path, hbs_irf_table** out);
HBS_API hbs_status hbs_irf_write(const hbs_irf_table* t, const char* path);
HBS_API void hbs_irf_free(hbs_irf_table* t);
HBS_API size_t hbs_irf_entry_count(const hbs_irf_table* t);
HBS_API hbs_status hbs_irf_lookup(const hbs_irf_table* t, hbs_shape shape, double sparsity,
                                  double* irf);
HBS_API hbs_status hbs_irf_calibrate(const hbs_shape* shapes, size_t shape_count,
                                     const double* sparsities, size_t sparsity_count,
                                     const hbs_bench_plan* plan, hbs_irf_table** out);
HBS_API hbs_status hbs_irf_analytic(const hbs_shape* shapes, size_t shape_count,
                                    const double* sparsities, size_t sparsity_count, double alpha,
                                    double beta, hbs_irf_table** out);
/* summary and text may each be NULL. */
HBS_API hbs_status hbs_estimate_cost(uint64_t m, uint64_t k, uint64_t n, const hbs_config* config,
                                     const hbs_irf_table* irf, hbs_cost_summary* summary,
                                     char** text);

#ifdef __cplusplus
}
#endif

#endif /* HBS_HBS_H */
