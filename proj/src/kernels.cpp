// SPDX-License-Identifier: Apache-2.0
#include "hbs/kernels.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>
#include <vector>

#include "hbs/core.hpp"
#include "hbs/error.hpp"

namespace hbs {

namespace {

std::string dims(std::uint64_t r, std::uint64_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

std::vector<double> widen(std::span<const float> v) { return {v.begin(), v.end()}; }

std::vector<float> narrow(const std::vector<double>& v) {
  std::vector<float> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return static_cast<float>(x); });
  return out;
}

inline void axpy(double* __restrict acc, double a, const double* __restrict x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += a * x[i];
}

void require_level_blocks(const BlockSparseLevel& level) {
  const auto coords = level.coords();
  for (std::size_t b = 0; b < coords.size(); ++b) {
    if (coords[b].gr >= level.grid_rows() || coords[b].gc >= level.grid_cols() ||
        (b > 0 && !(coords[b - 1] < coords[b]))) {
      throw Error(ErrorCode::Validation, "level block #" + std::to_string(b) +
                                             " is out of range or out of order");
    }
  }
}

// acc (rows x n, double) += level * b. Blocks are visited in stored order,
// which within each output row means ascending source column.
void accumulate_level(const BlockSparseLevel& level, const std::vector<double>& b, std::size_t n,
                      std::vector<double>& acc) {
  const BlockShape s = level.shape();
  const auto coords = level.coords();
  for (std::size_t blk = 0; blk < coords.size(); ++blk) {
    const auto tile = level.block_values(blk);
    const std::size_t row0 = static_cast<std::size_t>(coords[blk].gr) * s.bh;
    const std::size_t col0 = static_cast<std::size_t>(coords[blk].gc) * s.bw;
    for (std::size_t i = 0; i < s.bh; ++i) {
      double* out = acc.data() + (row0 + i) * n;
      for (std::size_t j = 0; j < s.bw; ++j) {
        axpy(out, static_cast<double>(tile[i * s.bw + j]), b.data() + (col0 + j) * n, n);
      }
    }
  }
}

}  // namespace

DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::Dimension,
                "shape mismatch: " + dims(a.rows(), a.cols()) + " times " + dims(b.rows(), b.cols()));
  }
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  const std::size_t n = b.cols();
  const std::vector<double> bd = widen(b.values());
  std::vector<double> acc(m * n, 0.0);
  const auto av = a.values();

  // Four output rows share each pass over a row of b.
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    double* c0 = acc.data() + i * n;
    double* c1 = c0 + n;
    double* c2 = c1 + n;
    double* c3 = c2 + n;
    for (std::size_t p = 0; p < k; ++p) {
      const double* brow = bd.data() + p * n;
      const double a0 = av[i * k + p];
      const double a1 = av[(i + 1) * k + p];
      const double a2 = av[(i + 2) * k + p];
      const double a3 = av[(i + 3) * k + p];
      for (std::size_t x = 0; x < n; ++x) {
        const double bx = brow[x];
        c0[x] += a0 * bx;
        c1[x] += a1 * bx;
        c2[x] += a2 * bx;
        c3[x] += a3 * bx;
      }
    }
  }
  for (; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      axpy(acc.data() + i * n, static_cast<double>(av[i * k + p]), bd.data() + p * n, n);
    }
  }
  return DenseMatrix(a.rows(), b.cols(), narrow(acc));
}

DenseMatrix level_matmul_acc(const BlockSparseLevel& level, const DenseMatrix& b,
                             const DenseMatrix& acc) {
  if (level.cols() != b.rows() || level.rows() != acc.rows() || acc.cols() != b.cols()) {
    throw Error(ErrorCode::Dimension, "shape mismatch: level " + dims(level.rows(), level.cols()) +
                                          " times " + dims(b.rows(), b.cols()) +
                                          " into accumulator " + dims(acc.rows(), acc.cols()));
  }
  require_level_blocks(level);
  std::vector<double> out = widen(acc.values());
  accumulate_level(level, widen(b.values()), b.cols(), out);
  return DenseMatrix(acc.rows(), acc.cols(), narrow(out));
}

DenseMatrix hbs_matmul(const HBSMatrix& m, const DenseMatrix& b) {
  if (m.cols() != b.rows()) {
    throw Error(ErrorCode::Dimension,
                "shape mismatch: " + dims(m.rows(), m.cols()) + " times " + dims(b.rows(), b.cols()));
  }
  require_valid(m);
  const std::size_t n = b.cols();
  const std::vector<double> bd = widen(b.values());
  std::vector<double> acc(static_cast<std::size_t>(m.rows()) * n, 0.0);
  for (const auto& level : m.levels()) accumulate_level(level, bd, n, acc);
  return DenseMatrix(m.rows(), b.cols(), narrow(acc));
}

FlopCount flops_dense(std::uint64_t m, std::uint64_t k, std::uint64_t n) noexcept {
  return FlopCount{2 * m * k * n};
}

FlopCount flops_sparse_level(const BlockSparseLevel& level, std::uint64_t n) noexcept {
  return FlopCount{2 * level.block_count() * level.shape().area() * n};
}

FlopCount flops_hbs(const HBSMatrix& m, std::uint64_t n) noexcept {
  FlopCount total;
  for (const auto& level : m.levels()) total = total + flops_sparse_level(level, n);
  return total;
}

double max_relative_error(const DenseMatrix& actual, const DenseMatrix& expected) {
  if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
    throw Error(ErrorCode::Dimension, "shape mismatch: " + dims(actual.rows(), actual.cols()) +
                                          " vs " + dims(expected.rows(), expected.cols()));
  }
  double worst = 0.0;
  const auto a = actual.values();
  const auto e = expected.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::fabs(static_cast<double>(a[i]) - static_cast<double>(e[i]));
    const double scale = std::max(std::fabs(static_cast<double>(e[i])), static_cast<double>(FLT_MIN));
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

}  // namespace hbs
