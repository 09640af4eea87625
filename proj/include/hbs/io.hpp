// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbs/perf_model.hpp"
#include "hbs/types.hpp"

namespace hbs {

using Bytes = std::vector<std::uint8_t>;

// DMAT: "DMAT", u32 version = 1, u32 rows, u32 cols, rows*cols f32.
// HBSF: "HBSF", u32 version = 1, u32 rows, u32 cols, u32 levels, then per
//       level u32 bh, u32 bw, u32 kept, and kept records of
//       (u32 gr, u32 gc, bh*bw f32). Everything little-endian.
//
// Decoders throw BadMagic, BadVersion, Truncated or Format; an HBSF whose
// structure fails validate() throws Validation carrying the full report.

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kDmatHeaderBytes = 16;
inline constexpr std::size_t kHbsfHeaderBytes = 20;

Bytes encode_dmat(const DenseMatrix& m);
DenseMatrix decode_dmat(std::span<const std::uint8_t> bytes);

Bytes encode_hbsf(const HBSMatrix& m);
HBSMatrix decode_hbsf(std::span<const std::uint8_t> bytes);

// HBS-IRF v1 text: header "HBS-IRF v1 <calibrated|analytic>", then one
// "bh bw sparsity irf" line per entry in key order.
std::string encode_irf(const IrfTable& table);
IrfTable decode_irf(std::string_view text);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

DenseMatrix read_dmat(const std::filesystem::path& path);
void write_dmat(const std::filesystem::path& path, const DenseMatrix& m);
HBSMatrix read_hbsf(const std::filesystem::path& path);
void write_hbsf(const std::filesystem::path& path, const HBSMatrix& m);
IrfTable read_irf(const std::filesystem::path& path);
void write_irf(const std::filesystem::path& path, const IrfTable& table);

/// "<bh>x<bw>".
BlockShape parse_shape(std::string_view text);
/// Comma-separated shapes.
std::vector<BlockShape> parse_shape_list(std::string_view text);
/// Comma-separated fractions in [0,1].
std::vector<double> parse_fraction_list(std::string_view text);
/// Comma-separated "<bh>x<bw>:<sparsity>" entries. Syntax problems throw
/// Parse; semantically invalid plans (divisibility, density) throw Config
/// with the same text validate() uses.
HBSConfig parse_level_spec(std::string_view text);

}  // namespace hbs
