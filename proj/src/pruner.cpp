// SPDX-License-Identifier: Apache-2.0
#include "hbs/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hbs/error.hpp"
#include "hbs/format.hpp"

namespace hbs {

namespace {

void require_tiles(const DenseMatrix& m, BlockShape shape) {
  if (shape.bh == 0 || shape.bw == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be >= 1");
  }
  if (m.rows() % shape.bh != 0) {
    throw Error(ErrorCode::Dimension, "rows: " + std::to_string(m.rows()) +
                                          " is not divisible by block height " +
                                          std::to_string(shape.bh));
  }
  if (m.cols() % shape.bw != 0) {
    throw Error(ErrorCode::Dimension, "cols: " + std::to_string(m.cols()) +
                                          " is not divisible by block width " +
                                          std::to_string(shape.bw));
  }
}

void require_sparsity(double sparsity) {
  if (!std::isfinite(sparsity) || sparsity < 0.0 || sparsity > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "sparsity must be a fraction in [0,1]");
  }
}

// `available`, when non-empty, marks blocks that may be kept before any
// unavailable one.
LevelPruneResult prune_level(const DenseMatrix& m, BlockShape shape, double sparsity,
                             const std::vector<std::uint8_t>& available) {
  require_tiles(m, shape);
  require_sparsity(sparsity);

  const BlockScoreGrid grid = block_abs_sum(m, shape);
  const std::uint64_t total = grid.scores.size();
  const std::uint64_t n_prune = pruned_block_count(sparsity, total);
  const std::uint64_t n_keep = total - n_prune;

  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0u);
  const auto& scores = grid.scores;
  auto ranks_before = [&](std::uint32_t a, std::uint32_t b) {
    if (!available.empty() && available[a] != available[b]) return available[a] > available[b];
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (n_keep > 0 && n_keep < total) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_keep - 1),
                     order.end(), ranks_before);
  }

  LevelTrace trace{shape, n_keep, n_prune, 0, std::numeric_limits<double>::infinity()};
  if (n_keep > 0) {
    trace.cutoff_score = scores[order[n_keep - 1]];
  }
  order.resize(n_keep);
  std::sort(order.begin(), order.end());

  const std::size_t cols = m.cols();
  const std::size_t area = static_cast<std::size_t>(shape.area());
  std::vector<float> residual(m.values().begin(), m.values().end());
  std::vector<BlockCoord> coords;
  std::vector<float> values;
  coords.reserve(n_keep);
  values.reserve(n_keep * area);
  for (const std::uint32_t idx : order) {
    if (!available.empty() && !available[idx]) {
      throw Error(ErrorCode::Config,
                  "level " + to_string(shape) + " must keep " + std::to_string(n_keep) +
                      " blocks but fewer uncovered blocks remain; lower its density");
    }
    if (scores[idx] == 0.0) ++trace.zero_score_kept;
    const BlockCoord c{idx / grid.grid_cols, idx % grid.grid_cols};
    coords.push_back(c);
    const std::size_t row0 = static_cast<std::size_t>(c.gr) * shape.bh;
    const std::size_t col0 = static_cast<std::size_t>(c.gc) * shape.bw;
    for (std::size_t i = 0; i < shape.bh; ++i) {
      const auto start = residual.begin() + static_cast<std::ptrdiff_t>((row0 + i) * cols + col0);
      values.insert(values.end(), start, start + shape.bw);
      std::fill_n(start, shape.bw, 0.0f);
    }
  }

  return LevelPruneResult{
      BlockSparseLevel(shape, grid.grid_rows, grid.grid_cols, std::move(coords), std::move(values)),
      DenseMatrix(m.rows(), m.cols(), std::move(residual)), trace};
}

}  // namespace

std::uint64_t pruned_block_count(double sparsity, std::uint64_t grid) {
  require_sparsity(sparsity);
  const double x = sparsity * static_cast<double>(grid);
  const double slack = 1e-12 * std::max(1.0, x);
  const auto n = static_cast<std::uint64_t>(std::floor(x + 0.5 + slack));
  return std::min(n, grid);
}

BlockScoreGrid block_abs_sum(const DenseMatrix& m, BlockShape shape) {
  require_tiles(m, shape);
  BlockScoreGrid grid;
  grid.grid_rows = m.rows() / shape.bh;
  grid.grid_cols = m.cols() / shape.bw;
  grid.scores.assign(static_cast<std::size_t>(grid.grid_rows) * grid.grid_cols, 0.0);
  for (std::uint32_t gr = 0; gr < grid.grid_rows; ++gr) {
    for (std::uint32_t gc = 0; gc < grid.grid_cols; ++gc) {
      double sum = 0.0;
      for (std::uint32_t i = 0; i < shape.bh; ++i) {
        const auto row = m.row(gr * shape.bh + i).subspan(static_cast<std::size_t>(gc) * shape.bw,
                                                          shape.bw);
        for (const float v : row) sum += std::fabs(static_cast<double>(v));
      }
      grid.scores[static_cast<std::size_t>(gr) * grid.grid_cols + gc] = sum;
    }
  }
  return grid;
}

LevelPruneResult prune_block_sparse(const DenseMatrix& m, BlockShape shape, double sparsity) {
  return prune_level(m, shape, sparsity, {});
}

HierarchicalPruneResult prune_hierarchical(const DenseMatrix& m, const HBSConfig& config) {
  require_tiles(m, config[0].shape);

  const std::size_t cols = m.cols();
  std::vector<std::uint8_t> covered(m.size(), 0);
  std::vector<BlockSparseLevel> levels;
  PruneTrace trace;
  DenseMatrix input = m;

  for (const LevelSpec& spec : config.levels()) {
    const BlockShape s = spec.shape;
    const std::uint32_t grid_rows = m.rows() / s.bh;
    const std::uint32_t grid_cols = m.cols() / s.bw;
    // Levels are nested, so a block is either wholly covered or wholly free;
    // its first cell decides.
    std::vector<std::uint8_t> available(static_cast<std::size_t>(grid_rows) * grid_cols);
    for (std::uint32_t gr = 0; gr < grid_rows; ++gr) {
      for (std::uint32_t gc = 0; gc < grid_cols; ++gc) {
        const std::size_t cell = static_cast<std::size_t>(gr) * s.bh * cols +
                                 static_cast<std::size_t>(gc) * s.bw;
        available[static_cast<std::size_t>(gr) * grid_cols + gc] = covered[cell] ? 0 : 1;
      }
    }

    LevelPruneResult step = prune_level(input, s, spec.sparsity, available);
    for (const BlockCoord c : step.level.coords()) {
      const std::size_t row0 = static_cast<std::size_t>(c.gr) * s.bh;
      const std::size_t col0 = static_cast<std::size_t>(c.gc) * s.bw;
      for (std::size_t i = 0; i < s.bh; ++i) {
        std::fill_n(covered.begin() + static_cast<std::ptrdiff_t>((row0 + i) * cols + col0), s.bw,
                    std::uint8_t{1});
      }
    }
    trace.levels.push_back(step.trace);
    levels.push_back(std::move(step.level));
    input = std::move(step.residual);
  }

  return HierarchicalPruneResult{HBSMatrix(m.rows(), m.cols(), std::move(levels)),
                                 std::move(trace)};
}

DenseMatrix lower_tensor4d(const Tensor4D& t, LoweringOrder order) {
  const std::size_t width = static_cast<std::size_t>(t.c()) * t.r() * t.s();
  std::vector<float> out(t.k() * width);
  for (std::uint32_t k = 0; k < t.k(); ++k) {
    float* row = out.data() + k * width;
    for (std::uint32_t c = 0; c < t.c(); ++c) {
      for (std::uint32_t r = 0; r < t.r(); ++r) {
        for (std::uint32_t s = 0; s < t.s(); ++s) {
          const std::size_t col = order == LoweringOrder::CRS
                                      ? (static_cast<std::size_t>(c) * t.r() + r) * t.s() + s
                                      : (static_cast<std::size_t>(r) * t.s() + s) * t.c() + c;
          row[col] = t(k, c, r, s);
        }
      }
    }
  }
  return DenseMatrix(t.k(), static_cast<std::uint32_t>(width), std::move(out));
}

std::string PruneTrace::render() const {
  TextTable table({"level", "block", "kept", "pruned", "zero-kept", "cutoff"});
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelTrace& l = levels[i];
    table.add_row({std::to_string(i + 1), to_string(l.shape), std::to_string(l.kept),
                   std::to_string(l.pruned), std::to_string(l.zero_score_kept),
                   format_general(l.cutoff_score)});
  }
  return table.render();
}

}  // namespace hbs
