// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cmath>
#include <string>

#include "hbs/error.hpp"
#include "hbs/format.hpp"
#include "hbs/io.hpp"

namespace hbs {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

double parse_fraction(std::string_view text, const char* what) {
  double v = 0.0;
  if (!parse_number(text, v) || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  if (v > 1.0) {
    throw Error(ErrorCode::Parse, std::string(what) + " " + std::string(text) +
                                      " is > 1; sparsities are fractions in [0,1] (did you mean " +
                                      format_general(v / 100.0) + "?)");
  }
  if (v < 0.0) {
    throw Error(ErrorCode::Parse,
                std::string(what) + " " + std::string(text) + " is negative; expected [0,1]");
  }
  return v;
}

}  // namespace

BlockShape parse_shape(std::string_view text) {
  const auto parts = split(text, 'x');
  BlockShape s;
  if (parts.size() != 2 || !parse_number(parts[0], s.bh) || !parse_number(parts[1], s.bw) ||
      s.bh == 0 || s.bw == 0) {
    throw Error(ErrorCode::Parse, "bad block shape '" + std::string(text) +
                                      "': expected <bh>x<bw> with positive integers");
  }
  return s;
}

std::vector<BlockShape> parse_shape_list(std::string_view text) {
  std::vector<BlockShape> shapes;
  for (const auto part : split(text, ',')) shapes.push_back(parse_shape(part));
  return shapes;
}

std::vector<double> parse_fraction_list(std::string_view text) {
  std::vector<double> out;
  for (const auto part : split(text, ',')) out.push_back(parse_fraction(part, "sparsity"));
  return out;
}

HBSConfig parse_level_spec(std::string_view text) {
  std::vector<LevelSpec> levels;
  for (const auto entry : split(text, ',')) {
    const auto parts = split(entry, ':');
    if (parts.size() != 2) {
      throw Error(ErrorCode::Parse, "bad level '" + std::string(entry) +
                                        "': expected <bh>x<bw>:<sparsity>");
    }
    levels.push_back(LevelSpec{parse_shape(parts[0]), parse_fraction(parts[1], "sparsity")});
  }
  return HBSConfig(std::move(levels));
}

std::string encode_irf(const IrfTable& table) {
  std::string out = std::string("HBS-IRF v1 ") + provenance_name(table.provenance()) + "\n";
  for (const auto& [key, irf] : table.entries()) {
    out += std::to_string(key.shape.bh) + " " + std::to_string(key.shape.bw) + " " +
           format_general(IrfTable::bucket_sparsity(key.bucket)) + " " + format_general(irf) + "\n";
  }
  return out;
}

IrfTable decode_irf(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  if (lines.empty()) throw Error(ErrorCode::Truncated, "HBS-IRF: empty file");

  const auto header = split_ws(lines[0]);
  if (header.empty() || header[0] != "HBS-IRF") {
    throw Error(ErrorCode::BadMagic, "HBS-IRF: bad header, expected \"HBS-IRF v1 <provenance>\"");
  }
  if (header.size() < 2 || header[1] != "v1") {
    throw Error(ErrorCode::BadVersion, "HBS-IRF: unsupported version '" +
                                           std::string(header.size() < 2 ? "" : header[1]) + "'");
  }
  if (header.size() != 3 || (header[2] != "calibrated" && header[2] != "analytic")) {
    throw Error(ErrorCode::Format, "HBS-IRF: provenance must be calibrated or analytic");
  }
  IrfTable table(header[2] == "calibrated" ? IrfProvenance::Calibrated : IrfProvenance::Analytic);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "HBS-IRF line " + std::to_string(i + 1) + ": ";
    const auto tok = split_ws(lines[i]);
    if (tok.empty()) continue;
    BlockShape shape;
    double sparsity = 0.0;
    double irf = 0.0;
    if (tok.size() != 4 || !parse_number(tok[0], shape.bh) || !parse_number(tok[1], shape.bw) ||
        !parse_number(tok[2], sparsity) || !parse_number(tok[3], irf)) {
      throw Error(ErrorCode::Format, where + "expected \"bh bw sparsity irf\"");
    }
    if (shape.bh == 0 || shape.bw == 0) throw Error(ErrorCode::Format, where + "zero block dimension");
    if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
      throw Error(ErrorCode::Format, where + "sparsity outside [0,1]");
    }
    if (!(irf > 0.0 && irf <= 1.0)) throw Error(ErrorCode::Format, where + "irf outside (0,1]");
    if (table.entries().count(IrfKey{shape, IrfTable::bucket_of(sparsity)})) {
      throw Error(ErrorCode::Format, where + "duplicate entry for " + to_string(shape) +
                                         " at sparsity " + std::string(tok[2]));
    }
    table.set(shape, sparsity, irf);
  }
  return table;
}

IrfTable read_irf(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  return decode_irf(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_irf(const std::filesystem::path& path, const IrfTable& table) {
  const std::string text = encode_irf(table);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace hbs
