// SPDX-License-Identifier: Apache-2.0
#include "hbs/perf_model.hpp"

#include <cmath>
#include <limits>

#include "hbs/error.hpp"
#include "hbs/format.hpp"

namespace hbs {

const char* provenance_name(IrfProvenance p) noexcept {
  return p == IrfProvenance::Calibrated ? "calibrated" : "analytic";
}

int IrfTable::bucket_of(double sparsity) {
  if (!std::isfinite(sparsity) || sparsity < 0.0 || sparsity > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "sparsity must be a fraction in [0,1]");
  }
  return static_cast<int>(std::lround(sparsity * kBuckets));
}

void IrfTable::set(BlockShape shape, double sparsity, double irf) {
  if (shape.bh == 0 || shape.bw == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be >= 1");
  }
  if (!(irf > 0.0 && irf <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "irf " + format_general(irf) + " for " + to_string(shape) + " is outside (0,1]");
  }
  entries_[IrfKey{shape, bucket_of(sparsity)}] = irf;
}

double IrfTable::lookup(BlockShape shape, double sparsity) const {
  const int want = bucket_of(sparsity);
  auto it = entries_.lower_bound(IrfKey{shape, 0});
  double best = 0.0;
  int best_dist = std::numeric_limits<int>::max();
  for (; it != entries_.end() && it->first.shape == shape; ++it) {
    const int dist = std::abs(it->first.bucket - want);
    if (dist < best_dist) {  // strict: ties keep the lower bucket
      best_dist = dist;
      best = it->second;
    }
  }
  if (best_dist == std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::MissingShape, "irf table has no entry for block " + to_string(shape));
  }
  return best;
}

bool CostEstimate::infinite_speedup() const noexcept { return std::isinf(speedup); }

std::string CostEstimate::render() const {
  TextTable table({"level", "block", "sparsity", "flops", "irf", "cost"});
  for (std::size_t i = 0; i < per_level.size(); ++i) {
    const LevelCost& l = per_level[i];
    table.add_row({std::to_string(i + 1), to_string(l.shape), format_general(l.sparsity),
                   format_fixed(l.flops, 0), format_general(l.irf), format_fixed(l.contribution, 1)});
  }
  std::string out = table.render();
  out += "C_dense:  " + std::to_string(c_dense.value) + "\n";
  out += "C_sparse: " + format_fixed(c_sparse, 1) + "\n";
  out += "speedup:  " + (infinite_speedup() ? std::string("inf (all levels fully sparse)")
                                            : format_fixed(speedup, 4)) +
         "\n";
  return out;
}

CostEstimate estimate_cost(const LayerDims& dims, const HBSConfig& config, const IrfTable& irf) {
  CostEstimate est;
  est.c_dense = flops_dense(dims.m, dims.k, dims.n);
  const double dense = static_cast<double>(est.c_dense.value);
  for (const LevelSpec& spec : config.levels()) {
    LevelCost lc;
    lc.shape = spec.shape;
    lc.sparsity = spec.sparsity;
    lc.flops = spec.density() * dense;
    // A fully pruned level costs nothing and needs no table entry.
    if (lc.flops > 0.0) lc.irf = irf.lookup(spec.shape, spec.sparsity);
    lc.contribution = lc.flops / lc.irf;
    est.c_sparse += lc.contribution;
    est.per_level.push_back(lc);
  }
  est.speedup = est.c_sparse > 0.0 ? dense / est.c_sparse
                                   : std::numeric_limits<double>::infinity();
  return est;
}

double analytic_irf(BlockShape shape, double sparsity, const AnalyticIrfParams& params) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "analytic irf needs alpha > 0 and beta > 0");
  }
  if (shape.bh == 0 || shape.bw == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be >= 1");
  }
  if (!std::isfinite(sparsity) || sparsity < 0.0 || sparsity > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "sparsity must be a fraction in [0,1]");
  }
  const double area = static_cast<double>(shape.area());
  return area / (area + params.alpha) / (1.0 + params.beta * sparsity);
}

IrfTable analytic_irf_table(std::span<const BlockShape> shapes, std::span<const double> sparsities,
                            const AnalyticIrfParams& params) {
  IrfTable table(IrfProvenance::Analytic);
  for (const BlockShape s : shapes) {
    for (const double sp : sparsities) table.set(s, sp, analytic_irf(s, sp, params));
  }
  return table;
}

}  // namespace hbs
