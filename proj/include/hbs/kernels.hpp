// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "hbs/types.hpp"

namespace hbs {

/// Count of scalar FLOPs (two per multiply-add).
struct FlopCount {
  std::uint64_t value = 0;

  friend constexpr FlopCount operator+(FlopCount a, FlopCount b) noexcept {
    return FlopCount{a.value + b.value};
  }
  friend constexpr auto operator<=>(const FlopCount&, const FlopCount&) = default;
};

// All products accumulate each output cell in double, in ascending source
// column order, and round to float once at the end.

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b);

/// acc + level * b.
DenseMatrix level_matmul_acc(const BlockSparseLevel& level, const DenseMatrix& b,
                             const DenseMatrix& acc);

/// Sum of all level products. Levels share one double accumulator per
/// output row, so the result is rounded once.
DenseMatrix hbs_matmul(const HBSMatrix& m, const DenseMatrix& b);

FlopCount flops_dense(std::uint64_t m, std::uint64_t k, std::uint64_t n) noexcept;
FlopCount flops_sparse_level(const BlockSparseLevel& level, std::uint64_t n) noexcept;
FlopCount flops_hbs(const HBSMatrix& m, std::uint64_t n) noexcept;

/// Largest per-cell |actual - expected| / |expected|. Cells whose expected
/// value is zero use an absolute difference over FLT_MIN.
double max_relative_error(const DenseMatrix& actual, const DenseMatrix& expected);

}  // namespace hbs
