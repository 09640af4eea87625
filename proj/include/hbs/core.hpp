// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hbs/types.hpp"

namespace hbs {

enum class Invariant { Tiling, Divisibility, Disjointness, Blocks };

const char* invariant_name(Invariant inv) noexcept;

struct CellCoord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend constexpr bool operator==(const CellCoord&, const CellCoord&) = default;
};

struct InvariantCheck {
  Invariant invariant;
  bool passed = true;
  /// Empty when passed; otherwise describes the first offending item.
  std::string detail;
  /// Offending matrix cell, when the violation has one (disjointness).
  std::optional<CellCoord> cell;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;

  bool passed() const noexcept;
  /// First failing check, in the fixed order tiling, divisibility,
  /// blocks, disjointness.
  const InvariantCheck* first_failure() const noexcept;
  const InvariantCheck& check(Invariant inv) const;
  std::string render() const;
};

/// Checks every structural invariant of `m`. Never throws.
ValidationReport validate(const HBSMatrix& m);

/// Throws Error(Validation) naming the first violated invariant.
void require_valid(const HBSMatrix& m);

/// Elementwise sum of all levels; uncovered cells are 0.
DenseMatrix reconstruct(const HBSMatrix& m);

/// Covered cells over total cells.
double density(const HBSMatrix& m);

/// Number of cells covered by kept blocks, summed over levels.
std::uint64_t covered_cells(const HBSMatrix& m);

/// Row-major bitmap (one byte per cell) of cells covered by any kept block.
/// Requires a valid matrix.
std::vector<std::uint8_t> coverage_mask(const HBSMatrix& m);

}  // namespace hbs
