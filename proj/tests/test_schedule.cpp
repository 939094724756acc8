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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>

#include "dopd/box.hpp"
#include "dopd/rng.hpp"
#include "dopd/schedule.hpp"
#include "support.hpp"

using namespace dopd;
using dopd::testing::vec;

TEST_CASE("polynomial schedule at t=1") {
  const Schedule s = Schedule::polynomial(0.7, 0.02, 3.0, 0.5, 1.0);
  const ScheduleValues v = s.at(1);
  CHECK(v.step == 0.7);
  CHECK(v.regularization == doctest::Approx(0.02 / 0.7));
  CHECK(v.scale == 3.0);
  CHECK_FALSE(v.scale_floored);
}

TEST_CASE("polynomial step at t=4 with theta1=1/2") {
  CHECK(Schedule::polynomial(1.0, 0.1, 1.0, 0.5, 1.0).at(4).step == 0.5);
}

TEST_CASE("geometric schedule at t=1") {
  const Schedule s = Schedule::geometric(2.0, 0.1, 1.0, 0.9);
  CHECK(s.psi(1) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(s.at(1).step == doctest::Approx(2.0 * std::sqrt(0.9)).epsilon(1e-15));
  CHECK(s.at(1).scale == doctest::Approx(0.9));
}

TEST_CASE("psi equals the explicit geometric sum") {
  const Schedule s = Schedule::geometric(1.0, 0.1, 1.0, 0.83);
  long double sum = 0.0L, power = 1.0L;
  for (Round t = 1; t <= 300; ++t) {
    power *= 0.83L;
    sum += power;
    CHECK(s.psi(t) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-13));
  }
}

TEST_CASE("alpha times gamma equals gamma0 for both families") {
  const Schedule poly = Schedule::polynomial(0.3, 0.017, 1.0, 0.5, 1.0);
  const Schedule geo = Schedule::geometric(0.1, 0.017, 1.0, 0.9);
  for (Round t : {1, 2, 10, 100, 4096, 100000}) {
    for (const Schedule* s : {&poly, &geo}) {
      const ScheduleValues v = s->at(t);
      CHECK(std::abs(v.step * v.regularization - 0.017) / 0.017 <= 1e-12);
    }
  }
}

TEST_CASE("polynomial values follow the power laws") {
  const Schedule s = Schedule::polynomial(0.3, 0.01, 2.0, 0.4, 1.3);
  for (Round t : {3, 77, 1024}) {
    CHECK(s.at(t).step == doctest::Approx(0.3 * std::pow(t, -0.4)).epsilon(1e-14));
    CHECK(s.at(t).scale == doctest::Approx(2.0 * std::pow(t, -1.3)).epsilon(1e-14));
  }
}

TEST_CASE("geometric scale underflow is floored and flagged") {
  const Schedule s = Schedule::geometric(0.1, 0.01, 1.0, 0.9);
  CHECK_FALSE(s.at(4096).scale_floored);
  const ScheduleValues v = s.at(10000);
  CHECK(v.scale_floored);
  CHECK(v.scale == std::numeric_limits<double>::min());
}

TEST_CASE("invalid parameters are config errors at construction") {
  auto code = [](auto&& make) {
    try {
      make();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUnavailable;
  };
  CHECK(code([] { Schedule::polynomial(1, 1, 1, 0.0, 1.0); }) == ErrorCode::kConfig);
  CHECK(code([] { Schedule::polynomial(1, 1, 1, 1.0, 2.0); }) == ErrorCode::kConfig);
  CHECK(code([] { Schedule::polynomial(1, 1, 1, 0.5, 0.5); }) == ErrorCode::kConfig);
  CHECK(code([] { Schedule::polynomial(-1, 1, 1, 0.5, 1.0); }) == ErrorCode::kConfig);
  CHECK(code([] { Schedule::geometric(1, 1, 1, 1.0); }) == ErrorCode::kConfig);
  CHECK(code([] { Schedule::geometric(1, 0, 1, 0.5); }) == ErrorCode::kConfig);
}

TEST_CASE("gamma0 is checked against 1 / (4 G2^2)") {
  const Schedule s = Schedule::polynomial(1, 0.1, 1, 0.5, 1.0);
  CHECK_NOTHROW(s.validate_against(1.5));
  CHECK_THROWS_AS(s.validate_against(2.0), Error);
}

TEST_CASE("positive part") {
  CHECK(positive_part(vec({-1, 2})) == vec({0, 2}));
  CHECK(positive_part(Vector::Zero(3)) == Vector::Zero(3));
  Rng rng(1, Stream::kVerify);
  for (int s = 0; s < 1000; ++s) {
    const Vector v = vec({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const Vector p = positive_part(v);
    for (int k = 0; k < 3; ++k) CHECK(p[k] == (v[k] > 0.0 ? v[k] : 0.0));
  }
}

TEST_CASE("box projection clamps") {
  const BoxSet box = BoxSet::cube(2, -5, 5);
  CHECK(project_box(vec({7, -9}), box) == vec({5, -5}));
  CHECK(project_box(vec({1.25, -3}), box) == vec({1.25, -3}));
  CHECK(box.radius() == doctest::Approx(std::sqrt(50.0)));
  CHECK(box.contains(vec({5, -5})));
  CHECK_FALSE(box.contains(vec({5.000000000000001, 0})));
  CHECK_THROWS_AS(BoxSet(vec({1, 0}), vec({0, 0})), Error);
}

TEST_CASE("projection inequalities on random triples") {
  const BoxSet box = BoxSet::cube(2, -5, 5);
  Rng rng(2, Stream::kVerify);
  for (int s = 0; s < 10000; ++s) {
    const Vector b = vec({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const Vector y = vec({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    const Vector c = vec({rng.uniform(-20, 20), rng.uniform(-20, 20)});
    const Vector x = project_box(b - c, box);
    const double lhs = 2.0 * (x - y).dot(c);
    const double rhs = (y - b).squaredNorm() - (y - x).squaredNorm() - (x - b).squaredNorm();
    CHECK(rhs - lhs >= -1e-10);
    CHECK(c.norm() - (x - b).norm() >= -1e-10);
  }
}

TEST_CASE("named streams are independent and reproducible") {
  Rng a(1, Stream::kGraph), b(1, Stream::kGraph), c(1, Stream::kNoise), d(2, Stream::kGraph);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  Rng e(1, Stream::kDither, 0), f(1, Stream::kDither, 1);
  CHECK(e.next() != f.next());
}

TEST_CASE("uniform draws lie in [0, 1) and below() in range") {
  Rng rng(3, Stream::kVerify);
  std::set<std::uint64_t> seen;
  for (int s = 0; s < 10000; ++s) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = rng.below(7);
    CHECK(k < 7);
    seen.insert(k);
  }
  CHECK(seen.size() == 7);
}
