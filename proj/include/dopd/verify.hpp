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
#include <string>
#include <vector>

namespace dopd {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int quantizer_samples = 100000;
  int consensus_windows = 100;
  int projection_triples = 10000;
  int gradient_triples = 100;
};

// Executable property suite: quantizer error bound, norm equivalence,
// consensus decay, projection inequalities, gradient, Lipschitz and Slater
// checks, double stochasticity and B-connectivity of generated graphs.
std::vector<PropertyResult> verify_properties(const VerifyOptions& options = {});

}  // namespace dopd
