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

#include "dopd/schedule.hpp"

#include <cmath>
#include <limits>

namespace dopd {

const char* to_string(ScheduleFamily family) {
  return family == ScheduleFamily::kPolynomial ? "polynomial" : "geometric";
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    raise(ErrorCode::kConfig, std::string(what) + " must be positive and finite");
  }
}

}  // namespace

Schedule Schedule::polynomial(double alpha0, double gamma0, double s0, double theta1,
                              double theta2) {
  require_positive(alpha0, "alpha0");
  require_positive(gamma0, "gamma0");
  require_positive(s0, "s0");
  if (!(theta1 > 0.0 && theta1 < 1.0)) raise(ErrorCode::kConfig, "theta1 must lie in (0, 1)");
  if (!(theta2 > theta1) || !std::isfinite(theta2)) {
    raise(ErrorCode::kConfig, "theta2 must exceed theta1");
  }
  Schedule s;
  s.family_ = ScheduleFamily::kPolynomial;
  s.alpha0_ = alpha0;
  s.gamma0_ = gamma0;
  s.s0_ = s0;
  s.theta1_ = theta1;
  s.theta2_ = theta2;
  return s;
}

Schedule Schedule::geometric(double alpha0, double gamma0, double s0, double mu) {
  require_positive(alpha0, "alpha0");
  require_positive(gamma0, "gamma0");
  require_positive(s0, "s0");
  if (!(mu > 0.0 && mu < 1.0)) raise(ErrorCode::kConfig, "mu must lie in (0, 1)");
  Schedule s;
  s.family_ = ScheduleFamily::kGeometric;
  s.alpha0_ = alpha0;
  s.gamma0_ = gamma0;
  s.s0_ = s0;
  s.mu_ = mu;
  return s;
}

double Schedule::psi(Round t) const {
  return mu_ * -std::expm1(static_cast<double>(t) * std::log(mu_)) / (1.0 - mu_);
}

ScheduleValues Schedule::at(Round t) const {
  require(t >= 1, ErrorCode::kPrecondition, "schedules are defined for t >= 1");
  const double td = static_cast<double>(t);
  ScheduleValues v;
  if (family_ == ScheduleFamily::kPolynomial) {
    v.step = alpha0_ / std::pow(td, theta1_);
    v.scale = s0_ / std::pow(td, theta2_);
  } else {
    v.step = alpha0_ * std::sqrt(psi(t) / td);
    v.scale = s0_ * std::pow(mu_, td);
  }
  v.regularization = gamma0_ / v.step;
  constexpr double kFloor = std::numeric_limits<double>::min();
  if (!(v.scale >= kFloor)) {
    v.scale = kFloor;
    v.scale_floored = true;
  }
  return v;
}

void Schedule::validate_against(double jacobian_bound) const {
  if (jacobian_bound <= 0.0) return;
  const double limit = 1.0 / (4.0 * jacobian_bound * jacobian_bound);
  if (gamma0_ > limit * (1.0 + 1e-12)) {
    raise(ErrorCode::kConfig, "gamma0 = " + std::to_string(gamma0_) +
                                  " exceeds 1/(4 G2^2) = " + std::to_string(limit));
  }
}

}  // namespace dopd
