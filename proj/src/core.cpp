// SPDX-License-Identifier: Apache-2.0
#include "hbs/core.hpp"

#include <algorithm>
#include <limits>

#include "hbs/error.hpp"

namespace hbs {

namespace {

std::string coord_str(std::uint64_t a, std::uint64_t b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::string level_str(std::size_t index, const BlockSparseLevel& level) {
  return "level " + std::to_string(index + 1) + " (" + to_string(level.shape()) + ")";
}

InvariantCheck check_tiling(const HBSMatrix& m) {
  InvariantCheck out{Invariant::Tiling, true, {}, std::nullopt};
  const auto levels = m.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    if (l.rows() != m.rows() || l.cols() != m.cols()) {
      out.passed = false;
      out.detail = level_str(i, l) + ": grid " + std::to_string(l.grid_rows()) + "x" +
                   std::to_string(l.grid_cols()) + " covers " + std::to_string(l.rows()) + "x" +
                   std::to_string(l.cols()) + ", matrix is " + std::to_string(m.rows()) + "x" +
                   std::to_string(m.cols());
      return out;
    }
  }
  return out;
}

InvariantCheck check_divisibility(const HBSMatrix& m) {
  InvariantCheck out{Invariant::Divisibility, true, {}, std::nullopt};
  std::vector<BlockShape> shapes;
  for (const auto& l : m.levels()) shapes.push_back(l.shape());
  if (auto msg = divisibility_violation(shapes)) {
    out.passed = false;
    out.detail = *msg;
  }
  return out;
}

InvariantCheck check_blocks(const HBSMatrix& m) {
  InvariantCheck out{Invariant::Blocks, true, {}, std::nullopt};
  const auto levels = m.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    const auto coords = l.coords();
    for (std::size_t b = 0; b < coords.size(); ++b) {
      const BlockCoord c = coords[b];
      if (c.gr >= l.grid_rows() || c.gc >= l.grid_cols()) {
        out.passed = false;
        out.detail = level_str(i, l) + ": block #" + std::to_string(b) + " at " +
                     coord_str(c.gr, c.gc) + " is outside grid " + std::to_string(l.grid_rows()) +
                     "x" + std::to_string(l.grid_cols());
        return out;
      }
      if (b > 0 && !(coords[b - 1] < c)) {
        out.passed = false;
        out.detail = level_str(i, l) + ": block #" + std::to_string(b) + " at " +
                     coord_str(c.gr, c.gc) +
                     (coords[b - 1] == c ? " duplicates the previous block"
                                         : " is not sorted after " +
                                               coord_str(coords[b - 1].gr, coords[b - 1].gc));
        return out;
      }
    }
  }
  return out;
}

InvariantCheck check_disjointness(const HBSMatrix& m) {
  InvariantCheck out{Invariant::Disjointness, true, {}, std::nullopt};
  const std::size_t cols = m.cols();
  const std::size_t cells = static_cast<std::size_t>(m.rows()) * cols;
  std::vector<std::int32_t> owner(cells, -1);

  std::size_t worst = std::numeric_limits<std::size_t>::max();
  std::int32_t first_level = -1;
  std::int32_t second_level = -1;

  const auto levels = m.levels();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& l = levels[li];
    const BlockShape s = l.shape();
    for (const BlockCoord c : l.coords()) {
      for (std::uint64_t i = 0; i < s.bh; ++i) {
        const std::uint64_t r = static_cast<std::uint64_t>(c.gr) * s.bh + i;
        if (r >= m.rows()) break;
        for (std::uint64_t j = 0; j < s.bw; ++j) {
          const std::uint64_t col = static_cast<std::uint64_t>(c.gc) * s.bw + j;
          if (col >= cols) break;
          const std::size_t idx = r * cols + col;
          const std::int32_t prev = owner[idx];
          if (prev >= 0 && prev != static_cast<std::int32_t>(li)) {
            if (idx < worst) {
              worst = idx;
              first_level = prev;
              second_level = static_cast<std::int32_t>(li);
            }
          } else {
            owner[idx] = static_cast<std::int32_t>(li);
          }
        }
      }
    }
  }
  if (worst != std::numeric_limits<std::size_t>::max()) {
    const CellCoord cell{static_cast<std::uint32_t>(worst / cols),
                         static_cast<std::uint32_t>(worst % cols)};
    out.passed = false;
    out.cell = cell;
    out.detail = "cell " + coord_str(cell.row, cell.col) + " is covered by level " +
                 std::to_string(first_level + 1) + " and level " +
                 std::to_string(second_level + 1);
  }
  return out;
}

}  // namespace

const char* invariant_name(Invariant inv) noexcept {
  switch (inv) {
    case Invariant::Tiling: return "tiling";
    case Invariant::Divisibility: return "divisibility";
    case Invariant::Disjointness: return "disjointness";
    case Invariant::Blocks: return "sorted-unique-blocks";
  }
  return "unknown";
}

bool ValidationReport::passed() const noexcept { return first_failure() == nullptr; }

const InvariantCheck* ValidationReport::first_failure() const noexcept {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

const InvariantCheck& ValidationReport::check(Invariant inv) const {
  for (const auto& c : checks) {
    if (c.invariant == inv) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "report has no such check");
}

std::string ValidationReport::render() const {
  std::string out;
  for (const auto& c : checks) {
    out += invariant_name(c.invariant);
    out += c.passed ? ": pass" : ": FAIL: " + c.detail;
    out += '\n';
  }
  return out;
}

ValidationReport validate(const HBSMatrix& m) {
  ValidationReport report;
  report.checks.push_back(check_tiling(m));
  report.checks.push_back(check_divisibility(m));
  report.checks.push_back(check_blocks(m));
  report.checks.push_back(check_disjointness(m));
  return report;
}

void require_valid(const HBSMatrix& m) {
  const ValidationReport report = validate(m);
  if (const InvariantCheck* bad = report.first_failure()) {
    throw Error(ErrorCode::Validation, std::string("invalid HBS matrix: ") +
                                           invariant_name(bad->invariant) + ": " + bad->detail);
  }
}

DenseMatrix reconstruct(const HBSMatrix& m) {
  require_valid(m);
  const std::size_t cols = m.cols();
  std::vector<float> out(static_cast<std::size_t>(m.rows()) * cols, 0.0f);
  for (const auto& l : m.levels()) {
    const BlockShape s = l.shape();
    const auto coords = l.coords();
    for (std::size_t b = 0; b < coords.size(); ++b) {
      const auto tile = l.block_values(b);
      const std::size_t row0 = static_cast<std::size_t>(coords[b].gr) * s.bh;
      const std::size_t col0 = static_cast<std::size_t>(coords[b].gc) * s.bw;
      for (std::size_t i = 0; i < s.bh; ++i) {
        std::copy_n(tile.begin() + i * s.bw, s.bw, out.begin() + (row0 + i) * cols + col0);
      }
    }
  }
  return DenseMatrix(m.rows(), m.cols(), std::move(out));
}

std::uint64_t covered_cells(const HBSMatrix& m) {
  std::uint64_t total = 0;
  for (const auto& l : m.levels()) total += l.block_count() * l.shape().area();
  return total;
}

double density(const HBSMatrix& m) {
  return static_cast<double>(covered_cells(m)) /
         (static_cast<double>(m.rows()) * static_cast<double>(m.cols()));
}

std::vector<std::uint8_t> coverage_mask(const HBSMatrix& m) {
  require_valid(m);
  const std::size_t cols = m.cols();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(m.rows()) * cols, 0);
  for (const auto& l : m.levels()) {
    const BlockShape s = l.shape();
    for (const BlockCoord c : l.coords()) {
      const std::size_t row0 = static_cast<std::size_t>(c.gr) * s.bh;
      const std::size_t col0 = static_cast<std::size_t>(c.gc) * s.bw;
      for (std::size_t i = 0; i < s.bh; ++i) {
        std::fill_n(mask.begin() + (row0 + i) * cols + col0, s.bw, std::uint8_t{1});
      }
    }
  }
  return mask;
}

}  // namespace hbs
