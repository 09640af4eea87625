// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hbs {

/// Rows and columns of one block of a block-sparse level.
struct BlockShape {
  std::uint32_t bh = 1;
  std::uint32_t bw = 1;

  constexpr std::uint64_t area() const noexcept {
    return static_cast<std::uint64_t>(bh) * bw;
  }

  friend constexpr auto operator<=>(const BlockShape&, const BlockShape&) = default;
};

/// "32x1" style rendering, the same syntax the level-spec parser accepts.
std::string to_string(BlockShape shape);

/// One level of a pruning plan. `sparsity` is the fraction of the full
/// level grid that is pruned, not a fraction of the residual.
struct LevelSpec {
  BlockShape shape;
  double sparsity = 0.0;

  double density() const noexcept { return 1.0 - sparsity; }
};

/// Returns a message describing the first pair of consecutive shapes that
/// break hierarchical divisibility, if any. Shared by config parsing and
/// matrix validation so both report identical text.
std::optional<std::string> divisibility_violation(std::span<const BlockShape> shapes);

/// Ordered hierarchical pruning plan. Always valid once constructed:
/// at least one level, sparsities in [0,1], nested block shapes and a
/// cumulative density of at most 1.
class HBSConfig {
 public:
  explicit HBSConfig(std::vector<LevelSpec> levels);

  std::span<const LevelSpec> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const LevelSpec& operator[](std::size_t i) const { return levels_.at(i); }

  /// Sum of per-level densities.
  double cumulative_density() const noexcept;

 private:
  std::vector<LevelSpec> levels_;
};

/// Row-major single-precision matrix with finite values.
class DenseMatrix {
 public:
  /// Zero-filled matrix.
  DenseMatrix(std::uint32_t rows, std::uint32_t cols);
  DenseMatrix(std::uint32_t rows, std::uint32_t cols, std::vector<float> values);

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const float> values() const noexcept { return values_; }
  std::span<const float> row(std::uint32_t r) const {
    return std::span<const float>(values_).subspan(static_cast<std::size_t>(r) * cols_, cols_);
  }
  float operator()(std::uint32_t r, std::uint32_t c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  /// Moves the storage out; the matrix is left empty-valued.
  std::vector<float> release() && { return std::move(values_); }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<float> values_;
};

/// Grid position of a block within one level.
struct BlockCoord {
  std::uint32_t gr = 0;
  std::uint32_t gc = 0;

  friend constexpr auto operator<=>(const BlockCoord&, const BlockCoord&) = default;
};

/// One block-sparse component M_i. Kept blocks are stored in coordinate
/// order with their dense tiles concatenated in `values()`.
///
/// Construction only checks that the value array has one tile per block;
/// structural invariants (range, ordering, tiling) are reported by
/// validate() so that malformed inputs can still be described.
class BlockSparseLevel {
 public:
  BlockSparseLevel(BlockShape shape, std::uint32_t grid_rows, std::uint32_t grid_cols,
                   std::vector<BlockCoord> coords, std::vector<float> values);

  /// Level with no kept blocks.
  BlockSparseLevel(BlockShape shape, std::uint32_t grid_rows, std::uint32_t grid_cols);

  BlockShape shape() const noexcept { return shape_; }
  std::uint32_t grid_rows() const noexcept { return grid_rows_; }
  std::uint32_t grid_cols() const noexcept { return grid_cols_; }
  std::uint64_t grid_size() const noexcept {
    return static_cast<std::uint64_t>(grid_rows_) * grid_cols_;
  }
  std::uint64_t rows() const noexcept { return static_cast<std::uint64_t>(grid_rows_) * shape_.bh; }
  std::uint64_t cols() const noexcept { return static_cast<std::uint64_t>(grid_cols_) * shape_.bw; }

  std::size_t block_count() const noexcept { return coords_.size(); }
  std::span<const BlockCoord> coords() const noexcept { return coords_; }
  std::span<const float> values() const noexcept { return values_; }

  /// Dense bh x bw tile of the i-th stored block, row-major.
  std::span<const float> block_values(std::size_t i) const {
    const auto area = static_cast<std::size_t>(shape_.area());
    return std::span<const float>(values_).subspan(i * area, area);
  }

  friend bool operator==(const BlockSparseLevel&, const BlockSparseLevel&) = default;

 private:
  BlockShape shape_;
  std::uint32_t grid_rows_;
  std::uint32_t grid_cols_;
  std::vector<BlockCoord> coords_;
  std::vector<float> values_;
};

/// Composite matrix M = M_1 + ... + M_N.
class HBSMatrix {
 public:
  HBSMatrix(std::uint32_t rows, std::uint32_t cols, std::vector<BlockSparseLevel> levels = {});

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::span<const BlockSparseLevel> levels() const noexcept { return levels_; }
  std::size_t level_count() const noexcept { return levels_.size(); }

  friend bool operator==(const HBSMatrix&, const HBSMatrix&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<BlockSparseLevel> levels_;
};

/// K x C x R x S convolution weights, stored with s varying fastest.
class Tensor4D {
 public:
  Tensor4D(std::uint32_t k, std::uint32_t c, std::uint32_t r, std::uint32_t s,
           std::vector<float> values);

  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t c() const noexcept { return c_; }
  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t s() const noexcept { return s_; }

  float operator()(std::uint32_t k, std::uint32_t c, std::uint32_t r, std::uint32_t s) const {
    return values_[((static_cast<std::size_t>(k) * c_ + c) * r_ + r) * s_ + s];
  }

 private:
  std::uint32_t k_, c_, r_, s_;
  std::vector<float> values_;
};

}  // namespace hbs
