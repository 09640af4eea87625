// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace hbs {

/// Shortest decimal text that parses back to the same double.
std::string format_general(double value);

/// Fixed-point text with `digits` decimals.
std::string format_fixed(double value, int digits);

/// Column-aligned plain-text table. First column left-aligned, others right.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  std::string render() const;

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace hbs
