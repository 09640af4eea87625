// SPDX-License-Identifier: Apache-2.0
#include "hbs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hbs/core.hpp"
#include "hbs/error.hpp"
#include "hbs/format.hpp"

namespace hbs {

std::uint64_t top_set_size(double p, std::uint64_t total) {
  if (!std::isfinite(p) || p <= 0.0 || p > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "percentile " + format_general(p) +
                                                " must be a fraction in (0,1]");
  }
  const double x = p * static_cast<double>(total);
  const double slack = 1e-12 * std::max(1.0, x);
  const auto n = static_cast<std::uint64_t>(std::ceil(x - slack));
  return std::min(n, total);
}

RetentionReport topk_retention(const DenseMatrix& original, const HBSMatrix& hbs,
                               std::span<const double> percentiles) {
  if (original.rows() != hbs.rows() || original.cols() != hbs.cols()) {
    throw Error(ErrorCode::Dimension, "original is " + std::to_string(original.rows()) + "x" +
                                          std::to_string(original.cols()) + ", pruned is " +
                                          std::to_string(hbs.rows()) + "x" +
                                          std::to_string(hbs.cols()));
  }
  const std::vector<std::uint8_t> covered = coverage_mask(hbs);
  const DenseMatrix kept = reconstruct(hbs);
  const auto orig = original.values();
  for (std::size_t i = 0; i < orig.size(); ++i) {
    const float v = kept.values()[i];
    if (v != 0.0f && v != orig[i]) {
      throw Error(ErrorCode::InvalidArgument,
                  "pruned matrix differs from the original at row " +
                      std::to_string(i / original.cols()) + ", col " +
                      std::to_string(i % original.cols()));
    }
  }

  RetentionReport report;
  report.total_elements = orig.size();
  std::uint64_t largest = 0;
  for (const double p : percentiles) largest = std::max(largest, top_set_size(p, orig.size()));

  std::vector<std::uint32_t> order(orig.size());
  std::iota(order.begin(), order.end(), 0u);
  auto ranks_before = [&](std::uint32_t a, std::uint32_t b) {
    const float ma = std::fabs(orig[a]);
    const float mb = std::fabs(orig[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(largest), order.end(),
                    ranks_before);

  // hits[i] = covered cells among the i highest-ranked cells.
  std::vector<std::uint64_t> hits(largest + 1, 0);
  for (std::uint64_t i = 0; i < largest; ++i) hits[i + 1] = hits[i] + covered[order[i]];

  for (const double p : percentiles) {
    const std::uint64_t size = top_set_size(p, orig.size());
    report.percentiles.push_back(p);
    report.retained.push_back(static_cast<double>(hits[size]) / static_cast<double>(size));
  }
  return report;
}

std::string RetentionReport::render_table() const {
  TextTable table({"top-p", "retained%"});
  for (std::size_t i = 0; i < percentiles.size(); ++i) {
    table.add_row({"top-" + format_general(std::round(percentiles[i] * 100.0 * 1e9) / 1e9),
                   format_fixed(retained[i] * 100.0, 2)});
  }
  return table.render() + "elements: " + std::to_string(total_elements) + "\n";
}

std::string RetentionReport::render_pairs() const {
  std::string out;
  for (std::size_t i = 0; i < percentiles.size(); ++i) {
    out += format_general(percentiles[i]) + " " + format_general(retained[i]) + "\n";
  }
  return out;
}

SparsitySummary sparsity_summary(const HBSMatrix& hbs) {
  SparsitySummary s;
  s.total_cells = static_cast<std::uint64_t>(hbs.rows()) * hbs.cols();
  for (const auto& level : hbs.levels()) {
    LevelSummary ls{level.shape(), level.block_count(), level.grid_size(), 0.0};
    ls.density = ls.total ? static_cast<double>(ls.kept) / static_cast<double>(ls.total) : 0.0;
    s.covered_cells += ls.kept * level.shape().area();
    s.levels.push_back(ls);
  }
  s.cumulative_density = static_cast<double>(s.covered_cells) / static_cast<double>(s.total_cells);
  return s;
}

std::string SparsitySummary::render() const {
  TextTable table({"level", "block", "kept", "total", "density"});
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelSummary& l = levels[i];
    table.add_row({std::to_string(i + 1), to_string(l.shape), std::to_string(l.kept),
                   std::to_string(l.total), format_general(l.density)});
  }
  return table.render() + "cumulative density: " + format_general(cumulative_density) + " (" +
         std::to_string(covered_cells) + "/" + std::to_string(total_cells) + " cells)\n";
}

}  // namespace hbs
