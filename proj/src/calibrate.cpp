// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>

#include "hbs/error.hpp"
#include "hbs/format.hpp"
#include "hbs/perf_model.hpp"
#include "hbs/pruner.hpp"
#include "hbs/random.hpp"

namespace hbs {

namespace {

using Clock = std::chrono::steady_clock;

std::mutex& bench_mutex() {
  static std::mutex m;
  return m;
}

volatile float g_sink = 0.0f;

template <class Fn>
Timing time_runs(Fn&& fn, unsigned warmup, unsigned reps) {
  for (unsigned i = 0; i < warmup; ++i) g_sink = fn()(0, 0);
  Timing t;
  for (unsigned i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    const DenseMatrix out = fn();
    const auto stop = Clock::now();
    g_sink = out(0, 0);
    t.samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::vector<double> sorted = t.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  t.median_seconds = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return t;
}

std::uint32_t narrow_dim(std::uint64_t v, const char* name) {
  if (v == 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, std::string("bench dimension ") + name +
                                                " must be in [1, 2^32)");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

double timer_resolution_seconds() {
  Clock::duration best = Clock::duration::max();
  for (int i = 0; i < 16; ++i) {
    const auto t0 = Clock::now();
    auto t1 = Clock::now();
    while (t1 == t0) t1 = Clock::now();
    best = std::min(best, t1 - t0);
  }
  return std::chrono::duration<double>(best).count();
}

IrfTable calibrate_irf(std::span<const BlockShape> shapes, std::span<const double> sparsities,
                       const BenchPlan& plan) {
  const std::lock_guard<std::mutex> lock(bench_mutex());

  const std::uint32_t m = narrow_dim(plan.dims.m, "m");
  const std::uint32_t k = narrow_dim(plan.dims.k, "k");
  const std::uint32_t n = narrow_dim(plan.dims.n, "n");
  if (plan.reps < 5) {
    throw Error(ErrorCode::InvalidArgument, "calibration needs at least 5 repetitions");
  }
  for (const BlockShape s : shapes) {
    if (s.bh == 0 || s.bw == 0 || m % s.bh != 0 || k % s.bw != 0) {
      throw Error(ErrorCode::Dimension, "bench dims " + std::to_string(m) + "x" +
                                            std::to_string(k) + " do not tile by block " +
                                            to_string(s));
    }
  }
  for (const double sp : sparsities) {
    if (!std::isfinite(sp) || sp < 0.0 || sp >= 1.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "calibration sparsities must lie in [0,1); got " + format_general(sp));
    }
  }

  const double min_time = std::max(1000.0 * timer_resolution_seconds(), 1e-6);
  const DenseMatrix a = generate_dense(m, k, plan.seed);
  const DenseMatrix b = generate_dense(k, n, plan.seed + 1);
  const double dense_flops = static_cast<double>(flops_dense(m, k, n).value);

  IrfTable table(IrfProvenance::Calibrated);
  for (const BlockShape s : shapes) {
    for (const double sp : sparsities) {
      const HBSMatrix hbs(m, k, {prune_block_sparse(a, s, sp).level});
      const double sparse_flops = static_cast<double>(flops_hbs(hbs, n).value);
      if (sparse_flops == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "block " + to_string(s) + " at sparsity " +
                                                    format_general(sp) +
                                                    " keeps no blocks; nothing to time");
      }
      const Timing dense = time_runs([&] { return dense_matmul(a, b); }, plan.warmup, plan.reps);
      const Timing sparse = time_runs([&] { return hbs_matmul(hbs, b); }, plan.warmup, plan.reps);
      const double fastest = std::min(dense.median_seconds, sparse.median_seconds);
      if (fastest < min_time) {
        throw Error(ErrorCode::TimerResolution,
                    "median run time " + format_general(fastest) + " s is below the " +
                        format_general(min_time) +
                        " s the timer can resolve; use a larger n or more repetitions");
      }
      const double ratio =
          (sparse_flops / sparse.median_seconds) / (dense_flops / dense.median_seconds);
      table.set(s, sp, std::clamp(ratio, 1e-9, 1.0));
    }
  }
  return table;
}

}  // namespace hbs
