// SPDX-License-Identifier: Apache-2.0
//
// Error type shared by every tolstack module.

#pragma once

#include <stdexcept>
#include <string>

namespace tolstack {

enum class ErrorCode {
  Domain,            // argument outside the mathematical domain
  InvalidBracket,    // search interval malformed
  NonFinite,         // objective produced NaN or infinity
  NoStraddle,        // bracket does not contain the target level
  EmptyChain,
  NonPositiveHalfWidth,
  Parse,             // malformed input text
  Validation,        // well-formed input violating a model invariant
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for errors caused by user input rather than numerical failure.
  bool is_input_error() const noexcept {
    switch (code_) {
      case ErrorCode::EmptyChain:
      case ErrorCode::NonPositiveHalfWidth:
      case ErrorCode::Parse:
      case ErrorCode::Validation:
      case ErrorCode::Io:
      case ErrorCode::Domain:
        return true;
      default:
        return false;
    }
  }

private:
  ErrorCode code_;
};

}  // namespace tolstack
