// SPDX-License-Identifier: Apache-2.0
#include "hbs/hbs.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "hbs/analysis.hpp"
#include "hbs/core.hpp"
#include "hbs/error.hpp"
#include "hbs/io.hpp"
#include "hbs/kernels.hpp"
#include "hbs/perf_model.hpp"
#include "hbs/pruner.hpp"
#include "hbs/random.hpp"

struct hbs_dense {
  hbs::DenseMatrix value;
};
struct hbs_matrix {
  hbs::HBSMatrix value;
};
struct hbs_config {
  hbs::HBSConfig value;
};
struct hbs_irf_table {
  hbs::IrfTable value;
};

namespace {

thread_local std::string g_last_error;

void require(bool ok, const char* what) {
  if (!ok) throw hbs::Error(hbs::ErrorCode::InvalidArgument, what);
}

template <class Fn>
hbs_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return HBS_OK;
  } catch (const hbs::Error& e) {
    g_last_error = e.what();
    return static_cast<hbs_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
  } catch (...) {
    g_last_error = "internal error";
  }
  return HBS_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hbs::BlockShape to_shape(hbs_shape s) { return hbs::BlockShape{s.bh, s.bw}; }

std::vector<hbs::BlockShape> to_shapes(const hbs_shape* shapes, size_t count) {
  require(shapes || count == 0, "shapes is null");
  std::vector<hbs::BlockShape> out;
  for (size_t i = 0; i < count; ++i) out.push_back(to_shape(shapes[i]));
  return out;
}

template <class T>
T* make_handle(auto&& value) {
  return new T{std::forward<decltype(value)>(value)};
}

}  // namespace

extern "C" {

const char* hbs_version(void) { return "1.0.0"; }

const char* hbs_status_name(hbs_status status) {
  if (status == HBS_OK) return "ok";
  if (status == HBS_ERR_INTERNAL) return "internal error";
  if (status < HBS_OK || status > HBS_ERR_INTERNAL) return "unknown status";
  return hbs::error_code_name(static_cast<hbs::ErrorCode>(status));
}

const char* hbs_last_error(void) { return g_last_error.c_str(); }

void hbs_string_free(char* s) { std::free(s); }

hbs_status hbs_dense_create(uint32_t rows, uint32_t cols, const float* values, hbs_dense** out) {
  return guarded([&] {
    require(out, "out is null");
    if (!values) {
      *out = make_handle<hbs_dense>(hbs::DenseMatrix(rows, cols));
      return;
    }
    std::vector<float> v(values, values + static_cast<size_t>(rows) * cols);
    *out = make_handle<hbs_dense>(hbs::DenseMatrix(rows, cols, std::move(v)));
  });
}

hbs_status hbs_dense_generate(uint32_t rows, uint32_t cols, uint64_t seed, hbs_distribution dist,
                              hbs_dense** out) {
  return guarded([&] {
    require(out, "out is null");
    require(dist == HBS_DIST_GAUSSIAN || dist == HBS_DIST_UNIFORM, "unknown distribution");
    const auto d = dist == HBS_DIST_GAUSSIAN ? hbs::Distribution::Gaussian : hbs::Distribution::Uniform;
    *out = make_handle<hbs_dense>(hbs::generate_dense(rows, cols, seed, d));
  });
}

void hbs_dense_free(hbs_dense* m) { delete m; }
uint32_t hbs_dense_rows(const hbs_dense* m) { return m ? m->value.rows() : 0; }
uint32_t hbs_dense_cols(const hbs_dense* m) { return m ? m->value.cols() : 0; }
const float* hbs_dense_data(const hbs_dense* m) { return m ? m->value.values().data() : nullptr; }

hbs_status hbs_dense_read(const char* path, hbs_dense** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = make_handle<hbs_dense>(hbs::read_dmat(path));
  });
}

hbs_status hbs_dense_write(const hbs_dense* m, const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    hbs::write_dmat(path, m->value);
  });
}

hbs_status hbs_dense_matmul(const hbs_dense* a, const hbs_dense* b, hbs_dense** out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    *out = make_handle<hbs_dense>(hbs::dense_matmul(a->value, b->value));
  });
}

hbs_status hbs_max_relative_error(const hbs_dense* actual, const hbs_dense* expected, double* out) {
  return guarded([&] {
    require(actual && expected && out, "null argument");
    *out = hbs::max_relative_error(actual->value, expected->value);
  });
}

hbs_status hbs_lower_tensor4d(const float* values, uint32_t k, uint32_t c, uint32_t r, uint32_t s,
                              hbs_lowering order, hbs_dense** out) {
  return guarded([&] {
    require(values && out, "null argument");
    require(order == HBS_LOWER_CRS || order == HBS_LOWER_RSC, "unknown lowering order");
    const size_t count = static_cast<size_t>(k) * c * r * s;
    hbs::Tensor4D t(k, c, r, s, std::vector<float>(values, values + count));
    *out = make_handle<hbs_dense>(hbs::lower_tensor4d(
        t, order == HBS_LOWER_CRS ? hbs::LoweringOrder::CRS : hbs::LoweringOrder::RSC));
  });
}

hbs_status hbs_config_parse(const char* spec, hbs_config** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    *out = make_handle<hbs_config>(hbs::parse_level_spec(spec));
  });
}

void hbs_config_free(hbs_config* c) { delete c; }
size_t hbs_config_level_count(const hbs_config* c) { return c ? c->value.size() : 0; }

hbs_status hbs_config_level(const hbs_config* c, size_t index, hbs_shape* shape, double* sparsity) {
  return guarded([&] {
    require(c, "config is null");
    require(index < c->value.size(), "level index out of range");
    const hbs::LevelSpec& l = c->value[index];
    if (shape) *shape = hbs_shape{l.shape.bh, l.shape.bw};
    if (sparsity) *sparsity = l.sparsity;
  });
}

hbs_status hbs_shapes_parse(const char* spec, hbs_shape* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(spec && count, "null argument");
    const auto shapes = hbs::parse_shape_list(spec);
    *count = shapes.size();
    require(shapes.size() <= capacity && (out || shapes.empty()), "output capacity too small");
    for (size_t i = 0; i < shapes.size(); ++i) out[i] = hbs_shape{shapes[i].bh, shapes[i].bw};
  });
}

hbs_status hbs_fractions_parse(const char* spec, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(spec && count, "null argument");
    const auto values = hbs::parse_fraction_list(spec);
    *count = values.size();
    require(values.size() <= capacity && (out || values.empty()), "output capacity too small");
    std::copy(values.begin(), values.end(), out);
  });
}

hbs_status hbs_prune(const hbs_dense* m, const hbs_config* config, hbs_matrix** out,
                     hbs_level_trace* trace) {
  return guarded([&] {
    require(m && config && out, "null argument");
    auto result = hbs::prune_hierarchical(m->value, config->value);
    if (trace) {
      for (size_t i = 0; i < result.trace.levels.size(); ++i) {
        const hbs::LevelTrace& t = result.trace.levels[i];
        trace[i] = hbs_level_trace{{t.shape.bh, t.shape.bw}, t.kept, t.pruned, t.zero_score_kept,
                                   t.cutoff_score};
      }
    }
    *out = make_handle<hbs_matrix>(std::move(result.hbs));
  });
}

hbs_status hbs_trace_render(const hbs_level_trace* trace, size_t count, char** text) {
  return guarded([&] {
    require((trace || count == 0) && text, "null argument");
    hbs::PruneTrace t;
    for (size_t i = 0; i < count; ++i) {
      t.levels.push_back(hbs::LevelTrace{to_shape(trace[i].shape), trace[i].kept, trace[i].pruned,
                                         trace[i].zero_score_kept, trace[i].cutoff_score});
    }
    *text = dup_string(t.render());
  });
}

void hbs_matrix_free(hbs_matrix* m) { delete m; }
uint32_t hbs_matrix_rows(const hbs_matrix* m) { return m ? m->value.rows() : 0; }
uint32_t hbs_matrix_cols(const hbs_matrix* m) { return m ? m->value.cols() : 0; }
size_t hbs_matrix_level_count(const hbs_matrix* m) { return m ? m->value.level_count() : 0; }
double hbs_matrix_density(const hbs_matrix* m) { return m ? hbs::density(m->value) : 0.0; }

hbs_status hbs_matrix_read(const char* path, hbs_matrix** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = make_handle<hbs_matrix>(hbs::read_hbsf(path));
  });
}

hbs_status hbs_matrix_write(const hbs_matrix* m, const char* path) {
  return guarded([&] {
    require(m && path, "null argument");
    hbs::write_hbsf(path, m->value);
  });
}

hbs_status hbs_matrix_validate(const hbs_matrix* m, int* passed, char** report) {
  return guarded([&] {
    require(m && passed, "null argument");
    const hbs::ValidationReport r = hbs::validate(m->value);
    *passed = r.passed() ? 1 : 0;
    if (report) *report = dup_string(r.render());
  });
}

hbs_status hbs_matrix_reconstruct(const hbs_matrix* m, hbs_dense** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = make_handle<hbs_dense>(hbs::reconstruct(m->value));
  });
}

hbs_status hbs_matmul(const hbs_matrix* m, const hbs_dense* b, hbs_dense** out) {
  return guarded([&] {
    require(m && b && out, "null argument");
    *out = make_handle<hbs_dense>(hbs::hbs_matmul(m->value, b->value));
  });
}

hbs_status hbs_summary_render(const hbs_matrix* m, char** text) {
  return guarded([&] {
    require(m && text, "null argument");
    *text = dup_string(hbs::sparsity_summary(m->value).render());
  });
}

hbs_status hbs_topk_retention(const hbs_dense* original, const hbs_matrix* pruned,
                              const double* percentiles, size_t count, double* retained) {
  return guarded([&] {
    require(original && pruned && (percentiles || count == 0) && (retained || count == 0),
            "null argument");
    const auto r = hbs::topk_retention(original->value, pruned->value,
                                       std::span<const double>(percentiles, count));
    std::copy(r.retained.begin(), r.retained.end(), retained);
  });
}

hbs_status hbs_topk_report(const hbs_dense* original, const hbs_matrix* pruned,
                           const double* percentiles, size_t count, hbs_report_format format,
                           char** text) {
  return guarded([&] {
    require(original && pruned && (percentiles || count == 0) && text, "null argument");
    const auto r = hbs::topk_retention(original->value, pruned->value,
                                       std::span<const double>(percentiles, count));
    *text = dup_string(format == HBS_REPORT_PAIRS ? r.render_pairs() : r.render_table());
  });
}

hbs_status hbs_irf_read(const char* path, hbs_irf_table** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = make_handle<hbs_irf_table>(hbs::read_irf(path));
  });
}

hbs_status hbs_irf_write(const hbs_irf_table* t, const char* path) {
  return guarded([&] {
    require(t && path, "null argument");
    hbs::write_irf(path, t->value);
  });
}

void hbs_irf_free(hbs_irf_table* t) { delete t; }
size_t hbs_irf_entry_count(const hbs_irf_table* t) { return t ? t->value.entries().size() : 0; }

hbs_status hbs_irf_lookup(const hbs_irf_table* t, hbs_shape shape, double sparsity, double* irf) {
  return guarded([&] {
    require(t && irf, "null argument");
    *irf = t->value.lookup(to_shape(shape), sparsity);
  });
}

hbs_status hbs_irf_calibrate(const hbs_shape* shapes, size_t shape_count, const double* sparsities,
                             size_t sparsity_count, const hbs_bench_plan* plan,
                             hbs_irf_table** out) {
  return guarded([&] {
    require(plan && out && (sparsities || sparsity_count == 0), "null argument");
    const auto s = to_shapes(shapes, shape_count);
    const hbs::BenchPlan p{{plan->m, plan->k, plan->n}, plan->reps, plan->warmup, plan->seed};
    *out = make_handle<hbs_irf_table>(
        hbs::calibrate_irf(s, std::span<const double>(sparsities, sparsity_count), p));
  });
}

hbs_status hbs_irf_analytic(const hbs_shape* shapes, size_t shape_count, const double* sparsities,
                            size_t sparsity_count, double alpha, double beta, hbs_irf_table** out) {
  return guarded([&] {
    require(out && (sparsities || sparsity_count == 0), "null argument");
    const auto s = to_shapes(shapes, shape_count);
    *out = make_handle<hbs_irf_table>(hbs::analytic_irf_table(
        s, std::span<const double>(sparsities, sparsity_count), hbs::AnalyticIrfParams{alpha, beta}));
  });
}

hbs_status hbs_estimate_cost(uint64_t m, uint64_t k, uint64_t n, const hbs_config* config,
                             const hbs_irf_table* irf, hbs_cost_summary* summary, char** text) {
  return guarded([&] {
    require(config && irf, "null argument");
    const hbs::CostEstimate est = hbs::estimate_cost({m, k, n}, config->value, irf->value);
    if (summary) {
      *summary = hbs_cost_summary{est.c_dense.value, est.c_sparse, est.speedup,
                                  est.infinite_speedup() ? 1 : 0};
    }
    if (text) *text = dup_string(est.render());
  });
}

}  // extern "C"
