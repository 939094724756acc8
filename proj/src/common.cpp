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

#include "dopd/common.hpp"

namespace dopd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kPrecondition: return "precondition violation";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kConvergence: return "no convergence";
    case ErrorCode::kUnavailable: return "unavailable";
  }
  return "unknown error";
}

void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dopd
