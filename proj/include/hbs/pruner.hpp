// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbs/types.hpp"

namespace hbs {

/// Per-block abs-sum scores over a level grid, row-major.
struct BlockScoreGrid {
  std::uint32_t grid_rows = 0;
  std::uint32_t grid_cols = 0;
  std::vector<double> scores;

  double operator()(std::uint32_t gr, std::uint32_t gc) const {
    return scores[static_cast<std::size_t>(gr) * grid_cols + gc];
  }
};

struct LevelTrace {
  BlockShape shape;
  std::uint64_t kept = 0;
  std::uint64_t pruned = 0;
  /// Kept blocks whose score was exactly zero (degenerate inputs only).
  std::uint64_t zero_score_kept = 0;
  /// Lowest score among kept blocks; +inf when nothing was kept.
  double cutoff_score = 0.0;

  friend bool operator==(const LevelTrace&, const LevelTrace&) = default;
};

struct PruneTrace {
  std::vector<LevelTrace> levels;

  std::string render() const;
  friend bool operator==(const PruneTrace&, const PruneTrace&) = default;
};

struct LevelPruneResult {
  BlockSparseLevel level;
  DenseMatrix residual;
  LevelTrace trace;
};

struct HierarchicalPruneResult {
  HBSMatrix hbs;
  PruneTrace trace;
};

/// round-half-up(sparsity * grid), tolerant of decimal-fraction round-off
/// in the product (0.35 * 10 counts as 3.5).
std::uint64_t pruned_block_count(double sparsity, std::uint64_t grid);

/// Sum of |value| over each block, accumulated in double in row-major cell
/// order. Throws Error(Dimension) when the matrix does not tile.
BlockScoreGrid block_abs_sum(const DenseMatrix& m, BlockShape shape);

/// Keeps the highest-scoring blocks (ties to the lower row-major grid
/// index) and zeroes them out of the returned residual.
LevelPruneResult prune_block_sparse(const DenseMatrix& m, BlockShape shape, double sparsity);

/// Runs prune_block_sparse level by level on the residual of the previous
/// level. Blocks already covered by an earlier level rank after every
/// uncovered block, so level supports stay disjoint even when zero-score
/// blocks must be kept.
HierarchicalPruneResult prune_hierarchical(const DenseMatrix& m, const HBSConfig& config);

enum class LoweringOrder { CRS, RSC };

/// Flattens each filter k into row k. CRS puts c outermost and s fastest;
/// RSC puts r outermost and c fastest.
DenseMatrix lower_tensor4d(const Tensor4D& t, LoweringOrder order);

}  // namespace hbs
