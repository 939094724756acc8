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

enum class ScheduleFamily {
  kPolynomial,  // alpha0 / t^theta1, gamma0 / alpha_t, s0 / t^theta2
  kGeometric,   // alpha0 sqrt(Psi_t / t), gamma0 / alpha_t, s0 mu^t
};

const char* to_string(ScheduleFamily family);

struct ScheduleValues {
  double step = 0.0;            // alpha_t
  double regularization = 0.0;  // gamma_t
  double scale = 0.0;           // s_t
  bool scale_floored = false;   // s_t hit the smallest normal double
};

// Step-size, regularization and compression-scaling sequences. Parameter
// ranges are checked at construction; queries never throw for t >= 1.
class Schedule {
 public:
  static Schedule polynomial(double alpha0, double gamma0, double s0, double theta1,
                             double theta2);
  static Schedule geometric(double alpha0, double gamma0, double s0, double mu);

  ScheduleFamily family() const { return family_; }
  double alpha0() const { return alpha0_; }
  double gamma0() const { return gamma0_; }
  double s0() const { return s0_; }
  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }
  double mu() const { return mu_; }

  ScheduleValues at(Round t) const;

  // Psi_t = mu + mu^2 + ... + mu^t (geometric family only).
  double psi(Round t) const;

  // Throws kConfig when gamma0 > 1 / (4 G2^2).
  void validate_against(double jacobian_bound) const;

 private:
  Schedule() = default;

  ScheduleFamily family_ = ScheduleFamily::kPolynomial;
  double alpha0_ = 1.0;
  double gamma0_ = 1.0;
  double s0_ = 1.0;
  double theta1_ = 0.5;
  double theta2_ = 1.0;
  double mu_ = 0.5;
};

}  // namespace dopd
