// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbs/types.hpp"

namespace hbs {

/// Fraction of the top-|value| cells of the original matrix that lie in
/// the kept support, one entry per requested percentile.
struct RetentionReport {
  std::vector<double> percentiles;
  std::vector<double> retained;
  std::uint64_t total_elements = 0;

  /// Aligned table, percentiles and retention shown as percentages.
  std::string render_table() const;
  /// One "p retained" line per percentile, both as fractions.
  std::string render_pairs() const;
};

/// ceil(p * total), tolerant of decimal round-off in the product.
std::uint64_t top_set_size(double p, std::uint64_t total);

/// Percentiles are fractions in (0,1]. The top set for p is the
/// top_set_size(p) cells with largest |value|, ties to the lower row-major
/// index. Membership is by coverage, not value. Throws Dimension on shape
/// mismatch and InvalidArgument when `hbs` disagrees with `original` on a
/// kept nonzero.
RetentionReport topk_retention(const DenseMatrix& original, const HBSMatrix& hbs,
                               std::span<const double> percentiles);

struct LevelSummary {
  BlockShape shape;
  std::uint64_t kept = 0;
  std::uint64_t total = 0;
  double density = 0.0;
};

struct SparsitySummary {
  std::vector<LevelSummary> levels;
  std::uint64_t covered_cells = 0;
  std::uint64_t total_cells = 0;
  double cumulative_density = 0.0;

  std::string render() const;
};

SparsitySummary sparsity_summary(const HBSMatrix& hbs);

}  // namespace hbs
