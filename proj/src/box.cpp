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

#include "dopd/box.hpp"

#include <algorithm>
#include <cmath>

namespace dopd {

BoxSet::BoxSet(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(lower_.size() > 0, ErrorCode::kConfig, "box dimension must be positive");
  require(lower_.size() == upper_.size(), ErrorCode::kConfig,
          "box bounds have different dimensions");
  for (Eigen::Index k = 0; k < lower_.size(); ++k) {
    require(std::isfinite(lower_[k]) && std::isfinite(upper_[k]), ErrorCode::kConfig,
            "box bounds must be finite");
    require(lower_[k] <= upper_[k], ErrorCode::kConfig, "box lower bound exceeds upper bound");
  }
}

BoxSet BoxSet::cube(int dimension, double lo, double hi) {
  require(dimension > 0, ErrorCode::kConfig, "box dimension must be positive");
  return BoxSet(Vector::Constant(dimension, lo), Vector::Constant(dimension, hi));
}

bool BoxSet::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower_[k] && x[k] <= upper_[k])) return false;
  }
  return true;
}

double BoxSet::radius() const {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < lower_.size(); ++k) {
    const double extreme = std::max(std::abs(lower_[k]), std::abs(upper_[k]));
    sum += extreme * extreme;
  }
  return std::sqrt(sum);
}

Vector project_box(const Vector& x, const BoxSet& box) {
  require(x.size() == box.dimension(), ErrorCode::kPrecondition,
          "projection: dimension mismatch");
  Vector out(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    out[k] = std::clamp(x[k], box.lower()[k], box.upper()[k]);
  }
  return out;
}

Vector positive_part(const Vector& v) { return v.cwiseMax(0.0); }

}  // namespace dopd
