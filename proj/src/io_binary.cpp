// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hbs/core.hpp"
#include "hbs/error.hpp"
#include "hbs/io.hpp"

namespace hbs {

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

  void tag(const char (&magic)[5]) { out_.insert(out_.end(), magic, magic + 4); }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f32s(std::span<const float> vs) {
    for (const float v : vs) f32(v);
  }

  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, const char* format)
      : bytes_(bytes), format_(format) {}

  void expect_tag(const char (&magic)[5]) {
    need(4, "magic");
    if (std::memcmp(bytes_.data(), magic, 4) != 0) {
      throw Error(ErrorCode::BadMagic, std::string(format_) + ": bad magic, expected \"" + magic + "\"");
    }
    pos_ = 4;
  }

  void expect_version() {
    const std::uint32_t v = u32("version");
    if (v != kFormatVersion) {
      throw Error(ErrorCode::BadVersion, std::string(format_) + ": unsupported version " +
                                             std::to_string(v) + " (expected " +
                                             std::to_string(kFormatVersion) + ")");
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  void f32s(std::vector<float>& out, std::size_t count) {
    need(4 * count, "values");
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t v = 0;
      for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
      pos_ += 4;
      const float f = std::bit_cast<float>(v);
      if (!std::isfinite(f)) fail_format("non-finite value at byte offset " + std::to_string(pos_ - 4));
      out.push_back(f);
    }
  }

  // Checks that `count` more bytes exist without consuming them.
  void need(std::uint64_t count, const char* what) const {
    if (bytes_.size() - pos_ < count) {
      throw Error(ErrorCode::Truncated,
                  std::string(format_) + ": truncated reading " + what + " at byte offset " +
                      std::to_string(pos_) + " (needs " + std::to_string(count) + " bytes, " +
                      std::to_string(bytes_.size() - pos_) + " left)");
    }
  }

  // Overflow-safe need(count * unit).
  void need_array(std::uint64_t count, std::uint64_t unit, const char* what) const {
    const std::uint64_t left = bytes_.size() - pos_;
    if (unit != 0 && count > left / unit) {
      throw Error(ErrorCode::Truncated,
                  std::string(format_) + ": truncated reading " + what + " at byte offset " +
                      std::to_string(pos_) + " (" + std::to_string(count) + " items of " +
                      std::to_string(unit) + " bytes, " + std::to_string(left) + " bytes left)");
    }
  }

  void expect_end() const {
    if (pos_ != bytes_.size()) {
      fail_format(std::to_string(bytes_.size() - pos_) + " trailing bytes after offset " +
                  std::to_string(pos_));
    }
  }

  [[noreturn]] void fail_format(const std::string& msg) const {
    throw Error(ErrorCode::Format, std::string(format_) + ": " + msg);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  const char* format_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes encode_dmat(const DenseMatrix& m) {
  ByteWriter w(kDmatHeaderBytes + 4 * m.size());
  w.tag("DMAT");
  w.u32(kFormatVersion);
  w.u32(m.rows());
  w.u32(m.cols());
  w.f32s(m.values());
  return std::move(w).take();
}

DenseMatrix decode_dmat(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "DMAT");
  r.expect_tag("DMAT");
  r.expect_version();
  const std::uint32_t rows = r.u32("rows");
  const std::uint32_t cols = r.u32("cols");
  if (rows == 0 || cols == 0) r.fail_format("rows and cols must be positive");
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  r.need_array(count, 4, "values");
  std::vector<float> values;
  values.reserve(count);
  r.f32s(values, count);
  r.expect_end();
  return DenseMatrix(rows, cols, std::move(values));
}

Bytes encode_hbsf(const HBSMatrix& m) {
  require_valid(m);
  std::size_t size = kHbsfHeaderBytes;
  for (const auto& l : m.levels()) size += 12 + l.block_count() * 8 + 4 * l.values().size();
  ByteWriter w(size);
  w.tag("HBSF");
  w.u32(kFormatVersion);
  w.u32(m.rows());
  w.u32(m.cols());
  w.u32(static_cast<std::uint32_t>(m.level_count()));
  for (const auto& l : m.levels()) {
    w.u32(l.shape().bh);
    w.u32(l.shape().bw);
    w.u32(static_cast<std::uint32_t>(l.block_count()));
    const auto coords = l.coords();
    for (std::size_t b = 0; b < coords.size(); ++b) {
      w.u32(coords[b].gr);
      w.u32(coords[b].gc);
      w.f32s(l.block_values(b));
    }
  }
  return std::move(w).take();
}

HBSMatrix decode_hbsf(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "HBSF");
  r.expect_tag("HBSF");
  r.expect_version();
  const std::uint32_t rows = r.u32("rows");
  const std::uint32_t cols = r.u32("cols");
  const std::uint32_t level_count = r.u32("level count");
  if (rows == 0 || cols == 0) r.fail_format("rows and cols must be positive");

  std::vector<BlockSparseLevel> levels;
  for (std::uint32_t li = 0; li < level_count; ++li) {
    const std::uint32_t bh = r.u32("block height");
    const std::uint32_t bw = r.u32("block width");
    const std::uint32_t kept = r.u32("kept count");
    if (bh == 0 || bw == 0) {
      r.fail_format("level " + std::to_string(li + 1) + " has a zero block dimension");
    }
    const std::uint64_t area = static_cast<std::uint64_t>(bh) * bw;
    if (kept > 0) r.need_array(area, 4, "block values");
    r.need_array(kept, 8 + 4 * area, "block records");
    std::vector<BlockCoord> coords;
    std::vector<float> values;
    coords.reserve(kept);
    values.reserve(kept * area);
    for (std::uint32_t b = 0; b < kept; ++b) {
      const std::uint32_t gr = r.u32("grid row");
      const std::uint32_t gc = r.u32("grid col");
      coords.push_back({gr, gc});
      r.f32s(values, area);
    }
    levels.emplace_back(BlockShape{bh, bw}, rows / bh, cols / bw, std::move(coords),
                        std::move(values));
  }
  r.expect_end();

  HBSMatrix m(rows, cols, std::move(levels));
  const ValidationReport report = validate(m);
  if (const InvariantCheck* bad = report.first_failure()) {
    throw Error(ErrorCode::Validation, std::string("HBSF: structure fails validation (") +
                                           invariant_name(bad->invariant) + ")\n" +
                                           report.render());
  }
  return m;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for reading");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "error reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "error writing " + path.string());
}

DenseMatrix read_dmat(const std::filesystem::path& path) { return decode_dmat(read_file(path)); }
void write_dmat(const std::filesystem::path& path, const DenseMatrix& m) {
  write_file(path, encode_dmat(m));
}
HBSMatrix read_hbsf(const std::filesystem::path& path) { return decode_hbsf(read_file(path)); }
void write_hbsf(const std::filesystem::path& path, const HBSMatrix& m) {
  write_file(path, encode_hbsf(m));
}

}  // namespace hbs
