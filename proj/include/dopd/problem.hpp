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
#include <iosfwd>
#include <optional>
#include <vector>

#include "dopd/box.hpp"
#include "dopd/common.hpp"

namespace dopd {

struct ConstraintEval {
  Vector value;     // g_{i,t}(x), length m_i
  Matrix jacobian;  // m_i x p
};

// Linear constraint block B x <= b of one agent at one round.
struct LinearConstraints {
  Matrix normals;  // m_i x p
  Vector offsets;  // m_i
};

// Oracle bound constants. G2 is reported both as the largest spectral norm
// and the largest Frobenius norm of the constraint Jacobians; the spectral
// value is the one used to validate gamma0 <= 1 / (4 G2^2).
struct ProblemBounds {
  double gradient_bound = 0.0;              // G1
  double jacobian_bound_spectral = 0.0;     // G2 (spectral)
  double jacobian_bound_frobenius = 0.0;    // G2 (Frobenius)
  double lipschitz = 0.0;                   // L
};

// Per-agent, per-round oracle interface. Implementations are pure functions
// of (agent, round, x) and may be queried concurrently.
class RoundProblem {
 public:
  virtual ~RoundProblem() = default;

  virtual int agents() const = 0;
  virtual int dimension() const = 0;
  virtual int constraint_count(int agent) const = 0;
  // Last round with materialized data.
  virtual Round horizon() const = 0;
  virtual const BoxSet& box() const = 0;

  virtual double loss(int agent, Round t, const Vector& x) const = 0;
  virtual Vector loss_gradient(int agent, Round t, const Vector& x) const = 0;
  virtual ConstraintEval constraint(int agent, Round t, const Vector& x) const = 0;

  // Present only when g_{i,t} is affine; the regret comparator needs it.
  virtual std::optional<LinearConstraints> linear_constraints(int /*agent*/, Round /*t*/) const {
    return std::nullopt;
  }
  // A point x_s with g_t(x_s) <= -margin for every round, when known.
  virtual std::optional<Vector> slater_point() const { return std::nullopt; }
  virtual double slater_margin() const { return 0.0; }

  virtual ProblemBounds bounds() const = 0;

  int total_constraints() const;
};

// ---------------------------------------------------------------------------
// Moving-target localization benchmark.
//
// Agent i owns a sensor at S_i and at round t observes a noisy squared
// distance D_{i,t} = |S_i - X_{0,t}|^2 + noise to a moving target. Its loss is
// f_{i,t}(x) = 1/4 (|S_i - x|^2 - D_{i,t})^2 and its constraint is the random
// affine block B_{i,t} x - b_{i,t} <= 0 with B entries in [0, 2] and b entries
// in [margin, margin + 1]. With margin > 0 the origin is strictly feasible.
// ---------------------------------------------------------------------------

struct LocalizationConfig {
  int agents = 100;
  int dimension = 2;
  int constraints_per_agent = 2;
  double margin = 0.01;          // b
  double box_half_width = 5.0;   // X = [-w, w]^p
  Round horizon = 0;             // rounds of data to materialize
  std::uint64_t seed = 1;
  bool allow_no_slater = false;  // permits margin <= 0
};

struct LocalizationInstance {
  LocalizationConfig config;
  std::vector<Vector> sensors;   // S_i
  std::vector<Vector> targets;   // X_{0,t} for t = 0..horizon
  std::vector<std::uint8_t> steps;  // Q_t for t = 1..horizon
  std::vector<double> noise;     // tau_{i,t}, index (t-1)*n + i
  std::vector<Matrix> normals;   // B_{i,t}, same indexing
  std::vector<Vector> offsets;   // b_{i,t}, same indexing

  int agents() const { return config.agents; }
  int dimension() const { return config.dimension; }
  Round horizon() const { return config.horizon; }
  BoxSet box() const;

  double distance(int agent, Round t) const;  // D_{i,t}
  const Matrix& normal(int agent, Round t) const;
  const Vector& offset(int agent, Round t) const;
};

// Bitwise equality of every stored field.
bool identical(const LocalizationInstance& a, const LocalizationInstance& b);

// Initial target position X_{0,0}.
Vector initial_target(int dimension);

// Target displacement between rounds t and t+1 given the Bernoulli step Q_t.
// Only the first two coordinates move.
Vector target_increment(Round t, bool step, int dimension);

// X_{0,t+1} from X_{0,t}; t >= 1.
Vector advance_target(const Vector& current, Round t, bool step);

LocalizationInstance generate_instance(const LocalizationConfig& config);

double localization_loss(const LocalizationInstance& instance, int agent, Round t,
                         const Vector& x);
// (|S_i - x|^2 - D_{i,t}) (x - S_i)
Vector localization_loss_gradient(const LocalizationInstance& instance, int agent, Round t,
                                  const Vector& x);
ConstraintEval localization_constraint(const LocalizationInstance& instance, int agent,
                                       Round t, const Vector& x);

// Bounds over the whole horizon. G1 and L are upper bounds evaluated at the
// box corners (|x - S_i| is maximized at a corner); G2 is exact.
ProblemBounds estimate_bounds(const LocalizationInstance& instance);

// Key-value text, one field per line, doubles in hex-float notation so that
// a write/read cycle reproduces the instance bit for bit.
void write_instance(std::ostream& out, const LocalizationInstance& instance);
LocalizationInstance read_instance(std::istream& in);

class LocalizationProblem final : public RoundProblem {
 public:
  explicit LocalizationProblem(LocalizationInstance instance);

  int agents() const override { return instance_.agents(); }
  int dimension() const override { return instance_.dimension(); }
  int constraint_count(int) const override { return instance_.config.constraints_per_agent; }
  Round horizon() const override { return instance_.horizon(); }
  const BoxSet& box() const override { return box_; }

  double loss(int agent, Round t, const Vector& x) const override;
  Vector loss_gradient(int agent, Round t, const Vector& x) const override;
  ConstraintEval constraint(int agent, Round t, const Vector& x) const override;
  std::optional<LinearConstraints> linear_constraints(int agent, Round t) const override;
  std::optional<Vector> slater_point() const override;
  double slater_margin() const override { return instance_.config.margin; }
  ProblemBounds bounds() const override { return bounds_; }

  const LocalizationInstance& instance() const { return instance_; }

 private:
  LocalizationInstance instance_;
  BoxSet box_;
  ProblemBounds bounds_;
};

}  // namespace dopd
