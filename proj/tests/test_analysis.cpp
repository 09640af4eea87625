// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hbs/analysis.hpp"
#include "hbs/core.hpp"
#include "hbs/error.hpp"
#include "hbs/pruner.hpp"
#include "oracle.hpp"

using namespace hbs;

TEST_CASE("top_set_size", "[analysis]") {
  CHECK(top_set_size(0.1, 100) == 10);
  CHECK(top_set_size(0.25, 16) == 4);
  CHECK(top_set_size(0.3, 10) == 3);
  CHECK(top_set_size(0.7, 10) == 7);
  CHECK(top_set_size(0.11, 10) == 2);
  CHECK(top_set_size(1.0, 7) == 7);
  CHECK(top_set_size(0.001, 10) == 1);
  CHECK_THROWS_AS(top_set_size(0.0, 10), Error);
  CHECK_THROWS_AS(top_set_size(1.5, 10), Error);
}

TEST_CASE("topk_retention examples", "[analysis]") {
  const std::vector<double> quarter{0.25};
  SECTION("block holding the largest values") {
    const DenseMatrix a(4, 4, {1, 2, 0, 0, 3, 4, 0, 0, 0, 0, 5, 6, 0, 0, 7, 8});
    const auto res = prune_hierarchical(a, HBSConfig({{{2, 2}, 0.75}}));
    const auto rep = topk_retention(a, res.hbs, quarter);
    CHECK(rep.retained == std::vector<double>{1.0});
    CHECK(rep.total_elements == 16);
  }
  SECTION("kept block misses the single largest value") {
    const DenseMatrix a(4, 4, {4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 9});
    const auto res = prune_hierarchical(a, HBSConfig({{{2, 2}, 0.75}}));
    const auto rep = topk_retention(a, res.hbs, quarter);
    CHECK(rep.retained == std::vector<double>{0.75});
  }
  SECTION("nothing pruned") {
    std::mt19937_64 rng(1);
    const DenseMatrix a(8, 8, oracle::gaussian(rng, 64));
    const auto res = prune_hierarchical(a, HBSConfig({{{2, 2}, 0.0}}));
    const std::vector<double> ps{0.1, 0.5, 1.0};
    CHECK(topk_retention(a, res.hbs, ps).retained == std::vector<double>{1, 1, 1});
  }
  SECTION("zero-valued kept cells still count as kept") {
    const DenseMatrix a(2, 2, {0, 0, 0, 1});
    const auto res = prune_hierarchical(a, HBSConfig({{{1, 1}, 0.5}}));
    const std::vector<double> all{1.0};
    CHECK(topk_retention(a, res.hbs, all).retained == std::vector<double>{0.5});
  }
  SECTION("errors") {
    const DenseMatrix a(2, 2, {1, 2, 3, 4});
    const auto res = prune_hierarchical(a, HBSConfig({{{1, 1}, 0.5}}));
    CHECK_THROWS_AS(topk_retention(DenseMatrix(2, 3), res.hbs, quarter), Error);
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(topk_retention(a, res.hbs, bad), Error);
    // Pruned matrix from a different original.
    CHECK_THROWS_AS(topk_retention(DenseMatrix(2, 2, {1, 2, 3, 5}), res.hbs, quarter), Error);
  }
}

TEST_CASE("report rendering", "[analysis]") {
  RetentionReport rep;
  rep.percentiles = {0.1, 0.5};
  rep.retained = {1.0, 0.625};
  rep.total_elements = 64;
  const std::string table = rep.render_table();
  CHECK(table.find("10") != std::string::npos);
  CHECK(table.find("62.5") != std::string::npos);
  CHECK(rep.render_pairs() == "0.1 1\n0.5 0.625\n");
}

TEST_CASE("retention matches a brute-force top-k", "[analysis][property]") {
  std::mt19937_64 rng(41);
  const std::vector<double> ps{0.05, 0.1, 0.25, 0.5, 0.9, 1.0};
  for (int iter = 0; iter < 200; ++iter) {
    const auto rc = oracle::random_case(rng, 24, 3);
    const std::size_t total = std::size_t{rc.rows} * rc.cols;
    const auto values = oracle::gaussian(rng, total);
    const DenseMatrix a(rc.rows, rc.cols, values);
    const auto res = prune_hierarchical(a, HBSConfig(rc.levels));
    const auto mask = coverage_mask(res.hbs);
    const auto rep = topk_retention(a, res.hbs, ps);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto top = oracle::top_cells(values, top_set_size(ps[i], total));
      std::size_t hit = 0;
      for (const std::size_t c : top) hit += mask[c] ? 1 : 0;
      CHECK(rep.retained[i] == static_cast<double>(hit) / static_cast<double>(top.size()));
    }
  }
}

TEST_CASE("unstructured pruning retains every top cell up to its density", "[analysis][property]") {
  std::mt19937_64 rng(43);
  for (int iter = 0; iter < 100; ++iter) {
    const std::uint32_t rows = std::uniform_int_distribution<std::uint32_t>(1, 32)(rng);
    const std::uint32_t cols = std::uniform_int_distribution<std::uint32_t>(1, 32)(rng);
    const std::uint32_t total = rows * cols;
    const std::uint32_t keep = std::uniform_int_distribution<std::uint32_t>(1, total)(rng);
    const double d = static_cast<double>(keep) / total;
    const DenseMatrix a(rows, cols, oracle::gaussian(rng, total));
    const auto res = prune_hierarchical(a, HBSConfig({{{1, 1}, 1.0 - d}}));
    std::vector<double> ps;
    for (std::uint32_t k = 1; k <= keep; ++k) ps.push_back(static_cast<double>(k) / total);
    for (const double r : topk_retention(a, res.hbs, ps).retained) CHECK(r == 1.0);
  }
}

TEST_CASE("sparsity_summary", "[analysis]") {
  std::mt19937_64 rng(5);
  const DenseMatrix a(64, 64, oracle::gaussian(rng, 64 * 64));
  const auto res = prune_hierarchical(
      a, HBSConfig({{{32, 1}, 0.75}, {{16, 1}, 0.875}, {{8, 1}, 0.9375}, {{4, 1}, 0.96875}, {{1, 1}, 0.96875}}));
  const SparsitySummary s = sparsity_summary(res.hbs);
  REQUIRE(s.levels.size() == 5);
  const std::vector<double> expected{0.25, 0.125, 0.0625, 0.03125, 0.03125};
  for (std::size_t i = 0; i < 5; ++i) CHECK(s.levels[i].density == expected[i]);
  CHECK(s.levels[0].kept == 32);
  CHECK(s.levels[0].total == 128);
  CHECK(s.cumulative_density == 0.5);
  CHECK(s.covered_cells == 2048);
  CHECK(s.total_cells == 4096);
  CHECK(s.render().find("32x1") != std::string::npos);

  const auto half = prune_hierarchical(DenseMatrix(4, 4, oracle::gaussian(rng, 16)), HBSConfig({{{2, 2}, 0.5}}));
  const SparsitySummary h = sparsity_summary(half.hbs);
  CHECK(h.levels[0].kept == 2);
  CHECK(h.levels[0].total == 4);
  CHECK(h.cumulative_density == 0.5);
}
