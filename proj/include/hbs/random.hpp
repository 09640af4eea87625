// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "hbs/types.hpp"

namespace hbs {

enum class Distribution { Gaussian, Uniform };

/// Throws Parse for anything but "gaussian" or "uniform".
Distribution parse_distribution(std::string_view name);

/// Seeded random matrix: standard normal, or uniform on [-1, 1).
/// Same seed, same matrix (per standard library implementation).
DenseMatrix generate_dense(std::uint32_t rows, std::uint32_t cols, std::uint64_t seed,
                           Distribution dist = Distribution::Gaussian);

}  // namespace hbs
