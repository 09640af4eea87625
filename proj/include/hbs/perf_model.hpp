// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hbs/kernels.hpp"
#include "hbs/types.hpp"

namespace hbs {

enum class IrfProvenance { Calibrated, Analytic };

const char* provenance_name(IrfProvenance p) noexcept;

struct IrfKey {
  BlockShape shape;
  /// Sparsity in 64ths, 0..64.
  int bucket = 0;

  friend constexpr auto operator<=>(const IrfKey&, const IrfKey&) = default;
};

/// Irregularity factors: sparse-kernel efficiency relative to dense, in
/// (0,1], keyed by block shape and sparsity rounded to 1/64.
class IrfTable {
 public:
  static constexpr int kBuckets = 64;

  explicit IrfTable(IrfProvenance provenance) : provenance_(provenance) {}

  static int bucket_of(double sparsity);
  static double bucket_sparsity(int bucket) noexcept {
    return static_cast<double>(bucket) / kBuckets;
  }

  /// Inserts or replaces. Throws InvalidArgument unless irf is in (0,1].
  void set(BlockShape shape, double sparsity, double irf);

  /// Exact bucket if present, else the nearest bucket for the shape (the
  /// lower one on a tie). Throws MissingShape when the shape is absent.
  double lookup(BlockShape shape, double sparsity) const;

  IrfProvenance provenance() const noexcept { return provenance_; }
  const std::map<IrfKey, double>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const IrfTable&, const IrfTable&) = default;

 private:
  IrfProvenance provenance_;
  std::map<IrfKey, double> entries_;
};

struct LayerDims {
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t n = 0;
};

struct LevelCost {
  BlockShape shape;
  double sparsity = 0.0;
  /// (1 - sparsity) * dense FLOPs.
  double flops = 0.0;
  double irf = 1.0;
  /// flops / irf.
  double contribution = 0.0;
};

struct CostEstimate {
  FlopCount c_dense;
  double c_sparse = 0.0;
  std::vector<LevelCost> per_level;
  /// c_dense / c_sparse; +inf when every level is fully sparse.
  double speedup = 0.0;

  bool infinite_speedup() const noexcept;
  std::string render() const;
};

/// Dense cost, per-level sparse cost scaled by 1/irf, and their ratio.
CostEstimate estimate_cost(const LayerDims& dims, const HBSConfig& config, const IrfTable& irf);

struct AnalyticIrfParams {
  double alpha = 1.0;
  double beta = 1.0;
};

/// area / (area + alpha) * 1 / (1 + beta * sparsity).
double analytic_irf(BlockShape shape, double sparsity, const AnalyticIrfParams& params);

IrfTable analytic_irf_table(std::span<const BlockShape> shapes, std::span<const double> sparsities,
                            const AnalyticIrfParams& params);

struct BenchPlan {
  LayerDims dims;
  unsigned reps = 5;
  unsigned warmup = 1;
  std::uint64_t seed = 0;
};

/// Median wall-clock seconds of `reps` runs after `warmup` discarded runs.
struct Timing {
  double median_seconds = 0.0;
  std::vector<double> samples;
};

/// Times hbs_matmul against dense_matmul on seeded random single-level
/// workloads and records irf = sparse FLOP/s / dense FLOP/s, clamped to
/// (0,1]. Calls are serialized process-wide.
IrfTable calibrate_irf(std::span<const BlockShape> shapes, std::span<const double> sparsities,
                       const BenchPlan& plan);

/// Smallest observable steady_clock step, in seconds.
double timer_resolution_seconds();

}  // namespace hbs
