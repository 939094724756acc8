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

#include <optional>
#include <vector>

#include "dopd/box.hpp"
#include "dopd/common.hpp"
#include "dopd/problem.hpp"

namespace dopd {

// X_T: the box plus every linear constraint row a_k x <= b_k seen up to T.
class FeasibleSetSnapshot {
 public:
  explicit FeasibleSetSnapshot(BoxSet box, std::optional<Vector> slater = std::nullopt);

  // Rows of every agent for rounds 1..T. Throws kPrecondition when the
  // problem has non-affine constraints.
  static FeasibleSetSnapshot from_problem(const RoundProblem& problem, Round horizon);

  // Appends rounds (covered(), horizon].
  void extend(const RoundProblem& problem, Round horizon);
  void add_row(const Vector& normal, double offset);

  const BoxSet& box() const { return box_; }
  int dimension() const { return box_.dimension(); }
  std::size_t rows() const { return offsets_.size(); }
  Round covered() const { return covered_; }
  const std::optional<Vector>& slater() const { return slater_; }

  // Row k as a pointer to dimension() contiguous doubles.
  const double* normal(std::size_t k) const { return normals_.data() + k * dimension(); }
  double offset(std::size_t k) const { return offsets_[k]; }

  // Largest a_k x - b_k over all rows; -inf without rows.
  double max_violation(const Vector& x) const;
  bool contains(const Vector& x, double tolerance = 0.0) const;

 private:
  BoxSet box_;
  std::optional<Vector> slater_;
  std::vector<double> normals_;  // row-major, rows() x dimension()
  std::vector<double> offsets_;
  Round covered_ = 0;
};

enum class MinimizerMethod {
  // Randomized incremental (Seidel) LP; exact up to rounding.
  kExact,
  // Projected subgradient on <c,x> + rho sum_k [a_k x - b_k]_+, then a
  // ratio-test repair toward the Slater point.
  kPenalty,
};

struct MinimizerOptions {
  MinimizerMethod method = MinimizerMethod::kExact;
  // Absolute tolerance is tolerance_scale * (1 + |c|).
  double tolerance_scale = 1e-6;
  double penalty_factor = 10.0;  // rho = penalty_factor * |c|
  int max_iterations = 200000;
  int stall_window = 200;  // steps without progress before the step halves
  std::uint64_t seed = 1;  // deterministic constraint order
  // For p <= 2: compare against a refined grid search and throw kNumeric on
  // disagreement beyond the grid resolution.
  bool grid_cross_check = false;
};

struct LinearMinimum {
  Vector point;
  double value = 0.0;
  int iterations = 0;
};

// min <c, x> over the snapshot. kInfeasible when the set is empty and
// kConvergence (with the best bound in the message) when the penalty method
// exhausts its budget.
LinearMinimum minimize_linear(const Vector& c, const FeasibleSetSnapshot& snapshot,
                              const MinimizerOptions& options = {});

// Coarse grid, then grids a quarter as wide around the best feasible node;
// p <= 2 only. The result is feasible, so its value bounds the minimum from
// above.
LinearMinimum grid_minimize(const Vector& c, const FeasibleSetSnapshot& snapshot,
                            int resolution = 201, int refinements = 12);

}  // namespace dopd
