// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>

#include "hbs/core.hpp"
#include "hbs/error.hpp"
#include "hbs/pruner.hpp"
#include "oracle.hpp"

using namespace hbs;

namespace {

const DenseMatrix kFourByFour(4, 4, {1, 2, 0, 0, 3, 4, 0, 0, 0, 0, 5, 6, 0, 0, 7, 8});

std::vector<float> vec(std::span<const float> s) { return {s.begin(), s.end()}; }

std::vector<std::uint32_t> kept_indices(const BlockSparseLevel& l) {
  std::vector<std::uint32_t> out;
  for (const BlockCoord c : l.coords()) out.push_back(c.gr * l.grid_cols() + c.gc);
  return out;
}

}  // namespace

TEST_CASE("block_abs_sum", "[pruner]") {
  const BlockScoreGrid g = block_abs_sum(kFourByFour, {2, 2});
  CHECK(g.grid_rows == 2);
  CHECK(g.grid_cols == 2);
  CHECK(g.scores == std::vector<double>{10, 0, 0, 26});

  const DenseMatrix signs(2, 2, {-1.5f, 2.0f, 0.0f, -3.0f});
  CHECK(block_abs_sum(signs, {1, 1}).scores == std::vector<double>{1.5, 2, 0, 3});
  CHECK(block_abs_sum(DenseMatrix(4, 4), {2, 2}).scores == std::vector<double>(4, 0.0));

  CHECK_THROWS_MATCHES(block_abs_sum(DenseMatrix(4, 6), {4, 4}), Error,
                       Catch::Matchers::MessageMatches(Catch::Matchers::StartsWith("cols")));
  CHECK_THROWS_MATCHES(block_abs_sum(DenseMatrix(6, 4), {4, 4}), Error,
                       Catch::Matchers::MessageMatches(Catch::Matchers::StartsWith("rows")));
}

TEST_CASE("pruned count rounds half up", "[pruner]") {
  CHECK(pruned_block_count(0.5, 4) == 2);
  CHECK(pruned_block_count(0.5, 3) == 2);    // 1.5 -> 2
  CHECK(pruned_block_count(0.35, 10) == 4);  // 3.4999999999999996 in binary
  CHECK(pruned_block_count(0.24, 10) == 2);
  CHECK(pruned_block_count(0.0, 7) == 0);
  CHECK(pruned_block_count(1.0, 7) == 7);
}

TEST_CASE("prune_block_sparse", "[pruner]") {
  SECTION("2x2 at 0.5 keeps the two scoring blocks") {
    const auto res = prune_block_sparse(kFourByFour, {2, 2}, 0.5);
    CHECK(kept_indices(res.level) == std::vector<std::uint32_t>{0, 3});
    CHECK(res.residual == DenseMatrix(4, 4));
    CHECK(vec(res.level.block_values(0)) == std::vector<float>{1, 2, 3, 4});
    CHECK(vec(res.level.block_values(1)) == std::vector<float>{5, 6, 7, 8});
    CHECK(res.trace.kept == 2);
    CHECK(res.trace.pruned == 2);
    CHECK(res.trace.cutoff_score == 10.0);
  }
  SECTION("sparsity 0 keeps everything") {
    std::mt19937_64 rng(1);
    const DenseMatrix a(6, 4, oracle::gaussian(rng, 24));
    const auto res = prune_block_sparse(a, {3, 2}, 0.0);
    CHECK(res.level.block_count() == 4);
    CHECK(res.residual == DenseMatrix(6, 4));
  }
  SECTION("1x1 at 0.5 keeps the two largest magnitudes") {
    const DenseMatrix a(2, 2, {1, -2, -3, 4});
    const auto res = prune_block_sparse(a, {1, 1}, 0.5);
    CHECK(kept_indices(res.level) == std::vector<std::uint32_t>{2, 3});
    CHECK(vec(res.level.values()) == std::vector<float>{-3, 4});
    CHECK(vec(res.residual.values()) == std::vector<float>{1, -2, 0, 0});
  }
  SECTION("equal scores go to the lower grid index") {
    const DenseMatrix a(1, 4, {1, -1, 1, -1});
    const auto res = prune_block_sparse(a, {1, 1}, 0.5);
    CHECK(kept_indices(res.level) == std::vector<std::uint32_t>{0, 1});
  }
  SECTION("sparsity outside [0,1] is rejected") {
    CHECK_THROWS_AS(prune_block_sparse(kFourByFour, {2, 2}, 1.5), Error);
    CHECK_THROWS_AS(prune_block_sparse(kFourByFour, {2, 2}, -0.1), Error);
  }
}

TEST_CASE("prune_hierarchical", "[pruner]") {
  SECTION("2x2 at .75 then 1x1 at .875") {
    const auto res = prune_hierarchical(kFourByFour, HBSConfig({{{2, 2}, 0.75}, {{1, 1}, 0.875}}));
    REQUIRE(res.hbs.level_count() == 2);
    CHECK(kept_indices(res.hbs.levels()[0]) == std::vector<std::uint32_t>{3});
    CHECK(vec(res.hbs.levels()[0].values()) == std::vector<float>{5, 6, 7, 8});
    CHECK(kept_indices(res.hbs.levels()[1]) == std::vector<std::uint32_t>{4, 5});
    CHECK(vec(res.hbs.levels()[1].values()) == std::vector<float>{3, 4});
    CHECK(density(res.hbs) == 0.375);
    CHECK(validate(res.hbs).passed());
  }
  SECTION("[(2x2) .5, (1x1) .75] keeps 2 of 4 blocks then 4 of 16 cells") {
    std::mt19937_64 rng(2);
    const DenseMatrix a(4, 4, oracle::gaussian(rng, 16));
    const auto res = prune_hierarchical(a, HBSConfig({{{2, 2}, 0.5}, {{1, 1}, 0.75}}));
    CHECK(res.trace.levels[0].kept == 2);
    CHECK(res.trace.levels[0].pruned == 2);
    CHECK(res.trace.levels[1].kept == 4);
    CHECK(res.trace.levels[1].pruned == 12);
    CHECK(res.trace.levels[1].zero_score_kept == 0);
    CHECK(validate(res.hbs).passed());
  }
  SECTION("zero residual: covered cells rank after uncovered zero cells") {
    // Level 1 takes both nonzero blocks; level 2 must keep 4 zero cells and
    // may only take them outside the covered blocks.
    const auto res = prune_hierarchical(kFourByFour, HBSConfig({{{2, 2}, 0.5}, {{1, 1}, 0.75}}));
    CHECK(kept_indices(res.hbs.levels()[1]) == std::vector<std::uint32_t>{2, 3, 6, 7});
    CHECK(res.trace.levels[1].zero_score_kept == 4);
    CHECK(res.trace.levels[1].cutoff_score == 0.0);
    CHECK(validate(res.hbs).passed());
  }
  SECTION("identity plan reproduces the input") {
    std::mt19937_64 rng(3);
    const DenseMatrix a(5, 7, oracle::gaussian(rng, 35));
    const auto res = prune_hierarchical(a, HBSConfig({{{1, 1}, 0.0}}));
    CHECK(reconstruct(res.hbs) == a);
  }
  SECTION("rounding that would force overlap is a config error") {
    // 2x1 at sparsity .1 prunes round(0.3) = 0 of 3 blocks and covers all
    // six cells; the 1x1 level then has nowhere to go.
    const DenseMatrix a(6, 1, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(prune_hierarchical(a, HBSConfig({{{2, 1}, 0.1}, {{1, 1}, 0.9}})), Error);
  }
  SECTION("non-divisible input is a dimension error") {
    CHECK_THROWS_AS(prune_hierarchical(DenseMatrix(6, 4), HBSConfig({{{4, 1}, 0.5}})), Error);
  }
}

TEST_CASE("pruner matches a brute-force ranking oracle", "[pruner][property]") {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 300; ++iter) {
    const auto rc = oracle::random_case(rng, 8, 3);
    std::vector<float> residual = oracle::gaussian(rng, std::size_t{rc.rows} * rc.cols);
    const DenseMatrix a(rc.rows, rc.cols, residual);
    const auto res = prune_hierarchical(a, HBSConfig(rc.levels));
    for (std::size_t li = 0; li < rc.levels.size(); ++li) {
      const auto& spec = rc.levels[li];
      const auto expected = oracle::kept_blocks(residual, rc.rows, rc.cols, spec.shape, spec.sparsity);
      REQUIRE(kept_indices(res.hbs.levels()[li]) == expected);
      oracle::zero_blocks(residual, rc.cols, spec.shape, expected);
    }
  }
}

TEST_CASE("pruning is deterministic and value preserving", "[pruner][property]") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    const auto rc = oracle::random_case(rng, 32, 4);
    const DenseMatrix a(rc.rows, rc.cols, oracle::gaussian(rng, std::size_t{rc.rows} * rc.cols));
    const HBSConfig cfg(rc.levels);
    const auto first = prune_hierarchical(a, cfg);
    const auto second = prune_hierarchical(a, cfg);
    CHECK(first.hbs == second.hbs);
    CHECK(first.trace == second.trace);

    const DenseMatrix d = reconstruct(first.hbs);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.values()[i] != 0.0f) {
        REQUIRE(std::bit_cast<std::uint32_t>(d.values()[i]) ==
                std::bit_cast<std::uint32_t>(a.values()[i]));
      }
    }
    std::uint64_t expected_cells = 0;
    for (const auto& t : first.trace.levels) {
      CHECK(t.kept + t.pruned == std::uint64_t{rc.rows} * rc.cols / t.shape.area());
      expected_cells += t.kept * t.shape.area();
    }
    CHECK(covered_cells(first.hbs) == expected_cells);
  }
}

TEST_CASE("lower_tensor4d", "[pruner][lowering]") {
  CHECK(lower_tensor4d(Tensor4D(1, 1, 1, 1, {7}), LoweringOrder::CRS) == DenseMatrix(1, 1, {7}));
  CHECK(lower_tensor4d(Tensor4D(1, 1, 1, 1, {7}), LoweringOrder::RSC) == DenseMatrix(1, 1, {7}));

  // t[k][c][0][0] = 10k + c
  const Tensor4D kc(2, 2, 1, 1, {0, 1, 10, 11});
  CHECK(lower_tensor4d(kc, LoweringOrder::CRS) == DenseMatrix(2, 2, {0, 1, 10, 11}));

  // t[0][c][r][0] = 2c + r + 1
  const Tensor4D cr(1, 2, 2, 1, {1, 2, 3, 4});
  CHECK(lower_tensor4d(cr, LoweringOrder::CRS) == DenseMatrix(1, 4, {1, 2, 3, 4}));
  CHECK(lower_tensor4d(cr, LoweringOrder::RSC) == DenseMatrix(1, 4, {1, 3, 2, 4}));

  CHECK_THROWS_AS(Tensor4D(1, 0, 1, 1, {}), Error);
}
