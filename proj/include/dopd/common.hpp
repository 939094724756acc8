// Copyright 2026 The dopd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dopd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Round indices are 1-based (t = 1, 2, ...); agent indices are 0-based.
using Round = std::int64_t;

enum class ErrorCode {
  kConfig,
  kIndex,
  kPrecondition,
  kNumeric,
  kIo,
  kParse,
  kInfeasible,
  kConvergence,
  kUnavailable,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) raise(code, message);
}

}  // namespace dopd
