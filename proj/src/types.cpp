// SPDX-License-Identifier: Apache-2.0
#include "hbs/types.hpp"

#include <cmath>

#include "hbs/error.hpp"

namespace hbs {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Dimension: return "dimension error";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::BadMagic: return "bad magic";
    case ErrorCode::BadVersion: return "unsupported version";
    case ErrorCode::Truncated: return "truncated file";
    case ErrorCode::Format: return "format error";
    case ErrorCode::MissingShape: return "missing shape";
    case ErrorCode::TimerResolution: return "timer resolution";
    case ErrorCode::Parse: return "parse error";
  }
  return "unknown error";
}

std::string to_string(BlockShape shape) {
  return std::to_string(shape.bh) + "x" + std::to_string(shape.bw);
}

std::optional<std::string> divisibility_violation(std::span<const BlockShape> shapes) {
  for (std::size_t i = 0; i + 1 < shapes.size(); ++i) {
    const BlockShape outer = shapes[i];
    const BlockShape inner = shapes[i + 1];
    if (inner.bh == 0 || inner.bw == 0) continue;  // reported as a shape error elsewhere
    const bool rows_ok = outer.bh % inner.bh == 0;
    const bool cols_ok = outer.bw % inner.bw == 0;
    if (rows_ok && cols_ok) continue;
    std::string msg = "level " + std::to_string(i + 1) + " block " + to_string(outer) +
                      " is not divisible by level " + std::to_string(i + 2) + " block " +
                      to_string(inner) + " (";
    if (!rows_ok) {
      msg += std::to_string(outer.bh) + " mod " + std::to_string(inner.bh) + " != 0";
    } else {
      msg += std::to_string(outer.bw) + " mod " + std::to_string(inner.bw) + " != 0";
    }
    return msg + ")";
  }
  return std::nullopt;
}

HBSConfig::HBSConfig(std::vector<LevelSpec> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw Error(ErrorCode::Config, "config needs at least one level");
  }
  std::vector<BlockShape> shapes;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const LevelSpec& l = levels_[i];
    if (l.shape.bh == 0 || l.shape.bw == 0) {
      throw Error(ErrorCode::Config,
                  "level " + std::to_string(i + 1) + ": block dimensions must be >= 1");
    }
    if (!std::isfinite(l.sparsity) || l.sparsity < 0.0 || l.sparsity > 1.0) {
      throw Error(ErrorCode::Config, "level " + std::to_string(i + 1) +
                                         ": sparsity must be a fraction in [0,1]");
    }
    shapes.push_back(l.shape);
  }
  if (auto msg = divisibility_violation(shapes)) {
    throw Error(ErrorCode::Config, "divisibility: " + *msg);
  }
  if (cumulative_density() > 1.0 + 1e-12) {
    throw Error(ErrorCode::Config, "cumulative density " + std::to_string(cumulative_density()) +
                                       " exceeds 1");
  }
}

double HBSConfig::cumulative_density() const noexcept {
  double total = 0.0;
  for (const auto& l : levels_) total += l.density();
  return total;
}

DenseMatrix::DenseMatrix(std::uint32_t rows, std::uint32_t cols)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::Dimension, "matrix dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(rows) * cols, 0.0f);
}

DenseMatrix::DenseMatrix(std::uint32_t rows, std::uint32_t cols, std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::Dimension, "matrix dimensions must be positive");
  }
  if (values_.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorCode::Dimension, "value count " + std::to_string(values_.size()) +
                                          " does not match " + std::to_string(rows) + "x" +
                                          std::to_string(cols));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "non-finite value at flat index " + std::to_string(i));
    }
  }
}

BlockSparseLevel::BlockSparseLevel(BlockShape shape, std::uint32_t grid_rows,
                                   std::uint32_t grid_cols, std::vector<BlockCoord> coords,
                                   std::vector<float> values)
    : shape_(shape),
      grid_rows_(grid_rows),
      grid_cols_(grid_cols),
      coords_(std::move(coords)),
      values_(std::move(values)) {
  if (shape_.bh == 0 || shape_.bw == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be >= 1");
  }
  if (values_.size() != coords_.size() * shape_.area()) {
    throw Error(ErrorCode::InvalidArgument,
                "level holds " + std::to_string(values_.size()) + " values for " +
                    std::to_string(coords_.size()) + " blocks of " + to_string(shape_));
  }
}

BlockSparseLevel::BlockSparseLevel(BlockShape shape, std::uint32_t grid_rows,
                                   std::uint32_t grid_cols)
    : BlockSparseLevel(shape, grid_rows, grid_cols, {}, {}) {}

HBSMatrix::HBSMatrix(std::uint32_t rows, std::uint32_t cols, std::vector<BlockSparseLevel> levels)
    : rows_(rows), cols_(cols), levels_(std::move(levels)) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::Dimension, "matrix dimensions must be positive");
  }
}

Tensor4D::Tensor4D(std::uint32_t k, std::uint32_t c, std::uint32_t r, std::uint32_t s,
                   std::vector<float> values)
    : k_(k), c_(c), r_(r), s_(s), values_(std::move(values)) {
  if (k == 0 || c == 0 || r == 0 || s == 0) {
    throw Error(ErrorCode::Dimension, "tensor dimensions must be >= 1");
  }
  const std::size_t expected = static_cast<std::size_t>(k) * c * r * s;
  if (values_.size() != expected) {
    throw Error(ErrorCode::Dimension, "tensor holds " + std::to_string(values_.size()) +
                                          " values, expected " + std::to_string(expected));
  }
}

}  // namespace hbs
