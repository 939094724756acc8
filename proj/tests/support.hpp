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

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dopd/problem.hpp"

namespace dopd::testing {

// f_{i,t}(x) = 1/2 |x - a_i|^2 + <tilt_t, x>, g_{i,t}(x) = B_i x - b_i with
// constant rows. Without rows the constraint is g = -1.
class QuadraticProblem final : public RoundProblem {
 public:
  QuadraticProblem(std::vector<Vector> anchors, Round horizon, double half_width = 5.0)
      : anchors_(std::move(anchors)),
        horizon_(horizon),
        box_(BoxSet::cube(static_cast<int>(anchors_.front().size()), -half_width, half_width)) {}

  void set_rows(int agent, Matrix normals, Vector offsets) {
    rows_.resize(anchors_.size());
    rows_[agent] = {std::move(normals), std::move(offsets)};
  }
  void set_tilt(Vector tilt) { tilt_ = std::move(tilt); }

  int agents() const override { return static_cast<int>(anchors_.size()); }
  int dimension() const override { return static_cast<int>(anchors_.front().size()); }
  int constraint_count(int agent) const override {
    return has_rows(agent) ? static_cast<int>(rows_[agent].offsets.size()) : 1;
  }
  Round horizon() const override { return horizon_; }
  const BoxSet& box() const override { return box_; }

  double loss(int i, Round t, const Vector& x) const override {
    return 0.5 * (x - anchors_[i]).squaredNorm() + tilt(t).dot(x);
  }
  Vector loss_gradient(int i, Round t, const Vector& x) const override {
    return x - anchors_[i] + tilt(t);
  }
  ConstraintEval constraint(int i, Round, const Vector& x) const override {
    if (!has_rows(i)) return {Vector::Constant(1, -1.0), Matrix::Zero(1, dimension())};
    return {rows_[i].normals * x - rows_[i].offsets, rows_[i].normals};
  }
  std::optional<LinearConstraints> linear_constraints(int i, Round) const override {
    if (!has_rows(i)) return LinearConstraints{Matrix::Zero(1, dimension()), Vector::Constant(1, 1.0)};
    return rows_[i];
  }
  ProblemBounds bounds() const override { return {}; }

 private:
  bool has_rows(int i) const { return i < static_cast<int>(rows_.size()) && rows_[i].offsets.size() > 0; }
  Vector tilt(Round t) const {
    return tilt_.size() > 0 ? Vector(tilt_ * std::sin(static_cast<double>(t)))
                            : Vector(Vector::Zero(dimension()));
  }

  std::vector<Vector> anchors_;
  Round horizon_;
  BoxSet box_;
  std::vector<LinearConstraints> rows_;
  Vector tilt_;
};

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dopd_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace dopd::testing
