// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hbs {

// Error families. Values line up with hbs_status in hbs.h.
enum class ErrorCode {
  InvalidArgument = 1,
  Dimension = 2,
  Config = 3,
  Validation = 4,
  Io = 5,
  BadMagic = 6,
  BadVersion = 7,
  Truncated = 8,
  Format = 9,
  MissingShape = 10,
  TimerResolution = 11,
  Parse = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hbs
