// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. Each one takes the slow, obvious
// route (full sorts, explicit cell maps, triple loops) and shares no code
// with the library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "hbs/types.hpp"

namespace hbs::oracle {

/// Kept block indices (row-major grid index), via a full sort of
/// (score desc, index asc) pairs. Scores are recomputed cell by cell.
inline std::vector<std::uint32_t> kept_blocks(const std::vector<float>& m, std::uint32_t rows,
                                              std::uint32_t cols, BlockShape s, double sparsity) {
  const std::uint32_t gr = rows / s.bh;
  const std::uint32_t gc = cols / s.bw;
  std::vector<std::pair<double, std::uint32_t>> ranked;
  for (std::uint32_t i = 0; i < gr; ++i) {
    for (std::uint32_t j = 0; j < gc; ++j) {
      double sum = 0.0;
      for (std::uint32_t r = 0; r < s.bh; ++r) {
        for (std::uint32_t c = 0; c < s.bw; ++c) {
          sum += std::fabs(static_cast<double>(m[(i * s.bh + r) * cols + j * s.bw + c]));
        }
      }
      ranked.emplace_back(-sum, i * gc + j);
    }
  }
  std::sort(ranked.begin(), ranked.end());
  const std::size_t total = ranked.size();
  // Grid-exact callers only: sparsity * total is integral here.
  const auto n_prune = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(total)));
  std::vector<std::uint32_t> kept;
  for (std::size_t i = 0; i < total - n_prune; ++i) kept.push_back(ranked[i].second);
  std::sort(kept.begin(), kept.end());
  return kept;
}

/// Zeroes the given blocks in place.
inline void zero_blocks(std::vector<float>& m, std::uint32_t cols, BlockShape s,
                        const std::vector<std::uint32_t>& kept) {
  const std::uint32_t gc = cols / s.bw;
  for (const std::uint32_t idx : kept) {
    for (std::uint32_t r = 0; r < s.bh; ++r) {
      for (std::uint32_t c = 0; c < s.bw; ++c) {
        m[((idx / gc) * s.bh + r) * cols + (idx % gc) * s.bw + c] = 0.0f;
      }
    }
  }
}

/// Triple-loop product, double accumulation, one rounding.
inline std::vector<float> matmul(const std::vector<float>& a, const std::vector<float>& b,
                                 std::size_t m, std::size_t k, std::size_t n) {
  std::vector<float> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += static_cast<double>(a[i * k + p]) * b[p * n + j];
      out[i * n + j] = static_cast<float>(acc);
    }
  }
  return out;
}

/// Top ceil-sized set of cells by (|v| desc, index asc), by full sort.
inline std::set<std::size_t> top_cells(const std::vector<float>& m, std::size_t count) {
  std::vector<std::pair<float, std::size_t>> ranked;
  for (std::size_t i = 0; i < m.size(); ++i) ranked.emplace_back(-std::fabs(m[i]), i);
  std::sort(ranked.begin(), ranked.end());
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.insert(ranked[i].second);
  return out;
}

/// Random grid-exact hierarchical config: each level's kept count is an
/// integer number of its blocks and the total density is at most `max_density`.
struct RandomCase {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<LevelSpec> levels;
};

inline RandomCase random_case(std::mt19937_64& rng, std::uint32_t max_dim, int max_levels,
                              double max_density = 1.0) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomCase rc;
  const int n_levels = pick(1, max_levels);
  // Shapes from coarse to fine: each divides the previous one.
  std::vector<BlockShape> shapes;
  BlockShape s{static_cast<std::uint32_t>(1u << pick(0, 3)), static_cast<std::uint32_t>(1u << pick(0, 3))};
  shapes.push_back(s);
  for (int i = 1; i < n_levels; ++i) {
    s.bh = std::max(1u, s.bh >> pick(0, 2));
    s.bw = std::max(1u, s.bw >> pick(0, 2));
    shapes.push_back(s);
  }
  const std::uint32_t gr = std::max(1u, max_dim / shapes[0].bh);
  const std::uint32_t gc = std::max(1u, max_dim / shapes[0].bw);
  rc.rows = shapes[0].bh * static_cast<std::uint32_t>(pick(1, static_cast<int>(gr)));
  rc.cols = shapes[0].bw * static_cast<std::uint32_t>(pick(1, static_cast<int>(gc)));

  // Remaining budget measured in cells so every choice stays grid-exact.
  const std::uint64_t total = static_cast<std::uint64_t>(rc.rows) * rc.cols;
  std::uint64_t budget = static_cast<std::uint64_t>(std::floor(max_density * static_cast<double>(total)));
  for (const BlockShape& shape : shapes) {
    const std::uint64_t grid = total / shape.area();
    const std::uint64_t max_keep = std::min<std::uint64_t>(grid, budget / shape.area());
    const std::uint64_t keep = std::uniform_int_distribution<std::uint64_t>(0, max_keep)(rng);
    budget -= keep * shape.area();
    rc.levels.push_back(LevelSpec{shape, static_cast<double>(grid - keep) / static_cast<double>(grid)});
  }
  return rc;
}

inline std::vector<float> gaussian(std::mt19937_64& rng, std::size_t count) {
  std::normal_distribution<float> nd(0.0f, 1.0f);
  std::vector<float> v(count);
  for (float& x : v) x = nd(rng);
  return v;
}

}  // namespace hbs::oracle
