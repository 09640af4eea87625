// SPDX-License-Identifier: Apache-2.0
#include "hbs/random.hpp"

#include <random>
#include <string>
#include <vector>

#include "hbs/error.hpp"

namespace hbs {

Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::Gaussian;
  if (name == "uniform") return Distribution::Uniform;
  throw Error(ErrorCode::Parse,
              "unknown distribution '" + std::string(name) + "' (expected gaussian or uniform)");
}

DenseMatrix generate_dense(std::uint32_t rows, std::uint32_t cols, std::uint64_t seed,
                           Distribution dist) {
  std::mt19937_64 rng(seed);
  std::vector<float> values(static_cast<std::size_t>(rows) * cols);
  if (dist == Distribution::Gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (float& v : values) v = static_cast<float>(normal(rng));
  } else {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (float& v : values) v = static_cast<float>(uniform(rng));
  }
  return DenseMatrix(rows, cols, std::move(values));
}

}  // namespace hbs
