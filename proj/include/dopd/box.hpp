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

#include "dopd/common.hpp"

namespace dopd {

// Axis-aligned box {x : lower <= x <= upper}; the decision set of every agent.
class BoxSet {
 public:
  BoxSet(Vector lower, Vector upper);

  // [lo, hi]^p.
  static BoxSet cube(int dimension, double lo, double hi);

  int dimension() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  // Exact membership; projections produce points that pass this test.
  bool contains(const Vector& x) const;

  // Largest Euclidean norm over the box, attained at a corner.
  double radius() const;

  Vector center() const { return 0.5 * (lower_ + upper_); }

 private:
  Vector lower_;
  Vector upper_;
};

// Euclidean projection onto the box: a componentwise clamp.
Vector project_box(const Vector& x, const BoxSet& box);

// Componentwise max(v, 0).
Vector positive_part(const Vector& v);

}  // namespace dopd
