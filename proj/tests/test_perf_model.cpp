// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hbs/error.hpp"
#include "hbs/perf_model.hpp"

using namespace hbs;
using Catch::Approx;

namespace {

IrfTable flat_table(std::initializer_list<BlockShape> shapes, double irf) {
  IrfTable t(IrfProvenance::Analytic);
  for (const BlockShape s : shapes) {
    for (int b = 0; b <= IrfTable::kBuckets; ++b) t.set(s, IrfTable::bucket_sparsity(b), irf);
  }
  return t;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("irf table buckets and lookup", "[perf]") {
  CHECK(IrfTable::bucket_of(0.0) == 0);
  CHECK(IrfTable::bucket_of(0.75) == 48);
  CHECK(IrfTable::bucket_of(1.0) == 64);
  CHECK_THROWS_AS(IrfTable::bucket_of(1.5), Error);
  CHECK_THROWS_AS(IrfTable::bucket_of(-0.1), Error);

  IrfTable t(IrfProvenance::Calibrated);
  t.set({4, 1}, 0.25, 0.4);
  t.set({4, 1}, 0.75, 0.8);
  t.set({1, 1}, 0.5, 0.1);
  CHECK(t.lookup({4, 1}, 0.25) == 0.4);
  CHECK(t.lookup({4, 1}, 0.75) == 0.8);
  CHECK(t.lookup({4, 1}, 0.0) == 0.4);
  CHECK(t.lookup({4, 1}, 0.99) == 0.8);
  // 0.5 sits exactly between buckets 16 and 48.
  CHECK(t.lookup({4, 1}, 0.5) == 0.4);
  CHECK(t.lookup({4, 1}, 0.52) == 0.8);
  CHECK(t.lookup({1, 1}, 0.9) == 0.1);
  CHECK(code_of([&] { t.lookup({2, 1}, 0.5); }) == ErrorCode::MissingShape);

  t.set({4, 1}, 0.25, 0.5);
  CHECK(t.lookup({4, 1}, 0.25) == 0.5);
  CHECK(t.entries().size() == 3);

  CHECK_THROWS_AS(t.set({4, 1}, 0.25, 0.0), Error);
  CHECK_THROWS_AS(t.set({4, 1}, 0.25, 1.5), Error);
  CHECK_THROWS_AS(t.set({4, 1}, 0.25, std::nan("")), Error);
  CHECK_THROWS_AS(t.set({0, 1}, 0.25, 0.5), Error);
}

TEST_CASE("estimate_cost examples", "[perf]") {
  const LayerDims dims{64, 64, 64};
  SECTION("single level, irf 1") {
    const auto est = estimate_cost(dims, HBSConfig({{{1, 1}, 0.5}}), flat_table({{1, 1}}, 1.0));
    CHECK(est.c_dense.value == 524288);
    CHECK(est.c_sparse == 262144.0);
    CHECK(est.speedup == 2.0);
    CHECK_FALSE(est.infinite_speedup());
  }
  SECTION("two levels, irf 1") {
    const auto est = estimate_cost(dims, HBSConfig({{{4, 1}, 0.875}, {{1, 1}, 0.875}}),
                                   flat_table({{4, 1}, {1, 1}}, 1.0));
    CHECK(est.speedup == 4.0);
    REQUIRE(est.per_level.size() == 2);
    CHECK(est.per_level[0].flops == 65536.0);
  }
  SECTION("mixed irf") {
    IrfTable t(IrfProvenance::Calibrated);
    t.set({4, 1}, 0.875, 0.5);
    t.set({1, 1}, 0.875, 0.25);
    const auto est = estimate_cost(dims, HBSConfig({{{4, 1}, 0.875}, {{1, 1}, 0.875}}), t);
    // 1 / (0.125/0.5 + 0.125/0.25)
    CHECK(est.speedup == Approx(1.0 / 0.75).epsilon(1e-12));
  }
  SECTION("irf pulls the prediction down") {
    const auto est = estimate_cost(dims, HBSConfig({{{32, 1}, 0.75}, {{1, 1}, 0.75}}),
                                   analytic_irf_table(std::vector<BlockShape>{{32, 1}, {1, 1}},
                                                      std::vector<double>{0.75}, {}));
    // irf(32x1) = 32/33/1.75, irf(1x1) = 0.5/1.75
    const double expected = 1.0 / (0.25 * 1.75 * 33.0 / 32.0 + 0.25 * 1.75 / 0.5);
    CHECK(est.speedup == Approx(expected).epsilon(1e-12));
  }
  SECTION("inefficient fine level makes HBS slower than dense") {
    IrfTable t(IrfProvenance::Calibrated);
    t.set({32, 1}, 0.75, 0.8);
    t.set({1, 1}, 0.75, 0.1);
    const auto est = estimate_cost(dims, HBSConfig({{{32, 1}, 0.75}, {{1, 1}, 0.75}}), t);
    CHECK(est.c_sparse / static_cast<double>(est.c_dense.value) == Approx(2.8125).epsilon(1e-12));
    CHECK(est.speedup == Approx(0.3556).margin(1e-4));
  }
  SECTION("fully pruned levels") {
    const auto est = estimate_cost(dims, HBSConfig({{{1, 1}, 1.0}}), IrfTable(IrfProvenance::Analytic));
    CHECK(est.infinite_speedup());
    CHECK(est.c_sparse == 0.0);
    CHECK(est.render().find("inf") != std::string::npos);
  }
  SECTION("missing shape") {
    CHECK(code_of([&] {
            estimate_cost(dims, HBSConfig({{{2, 1}, 0.5}}), flat_table({{1, 1}}, 1.0));
          }) == ErrorCode::MissingShape);
  }
  SECTION("render") {
    const auto est = estimate_cost(dims, HBSConfig({{{1, 1}, 0.5}}), flat_table({{1, 1}}, 1.0));
    CHECK(est.render().find("speedup:  2.0000") != std::string::npos);
  }
}

TEST_CASE("speedup is monotone in irf and density", "[perf][property]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  const LayerDims dims{128, 256, 64};
  for (int iter = 0; iter < 200; ++iter) {
    const double irf_lo = u(rng);
    const double irf_hi = std::min(1.0, irf_lo + u(rng));
    const int b = std::uniform_int_distribution<int>(0, 63)(rng);
    const double sp = IrfTable::bucket_sparsity(b);
    const HBSConfig cfg({{{1, 1}, sp}});
    const auto lo = estimate_cost(dims, cfg, flat_table({{1, 1}}, irf_lo));
    const auto hi = estimate_cost(dims, cfg, flat_table({{1, 1}}, irf_hi));
    CHECK(hi.speedup >= lo.speedup);

    const double sp2 = IrfTable::bucket_sparsity(std::uniform_int_distribution<int>(b, 63)(rng));
    const auto sparser = estimate_cost(dims, HBSConfig({{{1, 1}, sp2}}), flat_table({{1, 1}}, irf_lo));
    CHECK(sparser.speedup >= lo.speedup);
    // With irf <= 1 the prediction never beats the FLOP ratio.
    CHECK(lo.speedup <= 1.0 / (1.0 - sp) * (1 + 1e-12));
  }
}

TEST_CASE("analytic irf", "[perf]") {
  CHECK(analytic_irf({1, 1}, 0.0, {}) == 0.5);
  CHECK(analytic_irf({32, 1}, 0.0, {}) == Approx(32.0 / 33.0).epsilon(1e-15));
  CHECK(analytic_irf({1, 1}, 1.0, {}) == 0.25);
  CHECK(analytic_irf({2, 2}, 0.5, {2.0, 2.0}) == Approx(4.0 / 6.0 / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(analytic_irf({1, 1}, 0.5, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(analytic_irf({1, 1}, 1.5, {}), Error);

  // Larger blocks are never less efficient; more sparsity never more.
  for (std::uint32_t a = 1; a < 64; ++a) {
    CHECK(analytic_irf({a + 1, 1}, 0.5, {}) > analytic_irf({a, 1}, 0.5, {}));
  }
  for (int b = 0; b < 64; ++b) {
    CHECK(analytic_irf({4, 1}, IrfTable::bucket_sparsity(b + 1), {}) <
          analytic_irf({4, 1}, IrfTable::bucket_sparsity(b), {}));
  }

  const std::vector<BlockShape> shapes{{4, 1}, {1, 1}};
  const std::vector<double> sps{0.5, 0.75};
  const IrfTable t = analytic_irf_table(shapes, sps, {});
  CHECK(t.provenance() == IrfProvenance::Analytic);
  CHECK(t.entries().size() == 4);
  CHECK(t.lookup({4, 1}, 0.75) == analytic_irf({4, 1}, 0.75, {}));
}

TEST_CASE("calibration", "[perf][bench]") {
  const std::vector<BlockShape> shapes{{8, 1}, {1, 1}};
  const std::vector<double> sps{0.5, 0.875};
  SECTION("small workload yields bounded entries") {
    const BenchPlan plan{{128, 128, 64}, 5, 1, 7};
    const IrfTable t = calibrate_irf(shapes, sps, plan);
    CHECK(t.provenance() == IrfProvenance::Calibrated);
    CHECK(t.entries().size() == 4);
    for (const auto& [key, irf] : t.entries()) {
      CHECK(irf > 0.0);
      CHECK(irf <= 1.0);
    }
  }
  SECTION("argument checks") {
    CHECK(code_of([&] { calibrate_irf(shapes, sps, BenchPlan{{128, 128, 64}, 4, 1, 7}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { calibrate_irf(shapes, sps, BenchPlan{{0, 128, 64}, 5, 1, 7}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { calibrate_irf(shapes, sps, BenchPlan{{12, 128, 64}, 5, 1, 7}); }) ==
          ErrorCode::Dimension);
    const std::vector<double> full{1.0};
    CHECK(code_of([&] { calibrate_irf(shapes, full, BenchPlan{{128, 128, 64}, 5, 1, 7}); }) ==
          ErrorCode::InvalidArgument);
  }
  SECTION("tiny workloads hit the timer floor") {
    const std::vector<BlockShape> one{{1, 1}};
    const std::vector<double> half{0.5};
    CHECK(code_of([&] { calibrate_irf(one, half, BenchPlan{{2, 2, 1}, 5, 0, 7}); }) ==
          ErrorCode::TimerResolution);
  }
  SECTION("timer resolution is positive and small") {
    const double r = timer_resolution_seconds();
    CHECK(r > 0.0);
    CHECK(r < 1e-3);
  }
}
