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

#include "dopd/linear_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dopd/rng.hpp"

namespace dopd {

FeasibleSetSnapshot::FeasibleSetSnapshot(BoxSet box, std::optional<Vector> slater)
    : box_(std::move(box)), slater_(std::move(slater)) {
  if (slater_) {
    require(slater_->size() == box_.dimension(), ErrorCode::kPrecondition,
            "Slater point dimension mismatch");
  }
}

FeasibleSetSnapshot FeasibleSetSnapshot::from_problem(const RoundProblem& problem,
                                                      Round horizon) {
  std::optional<Vector> anchor = problem.slater_point();
  if (anchor && problem.slater_margin() <= 0.0) anchor.reset();
  FeasibleSetSnapshot snapshot(problem.box(), anchor);
  snapshot.extend(problem, horizon);
  return snapshot;
}

void FeasibleSetSnapshot::extend(const RoundProblem& problem, Round horizon) {
  require(problem.dimension() == dimension(), ErrorCode::kPrecondition,
          "snapshot dimension mismatch");
  require(horizon >= covered_, ErrorCode::kPrecondition, "snapshots only grow");
  require(horizon <= problem.horizon(), ErrorCode::kIndex, "horizon beyond the problem data");
  const std::size_t extra = static_cast<std::size_t>(horizon - covered_) *
                            static_cast<std::size_t>(problem.total_constraints());
  offsets_.reserve(offsets_.size() + extra);
  normals_.reserve(normals_.size() + extra * dimension());
  for (Round t = covered_ + 1; t <= horizon; ++t) {
    for (int i = 0; i < problem.agents(); ++i) {
      const std::optional<LinearConstraints> lc = problem.linear_constraints(i, t);
      require(lc.has_value(), ErrorCode::kPrecondition,
              "the feasible-set snapshot needs affine constraints");
      for (Eigen::Index r = 0; r < lc->normals.rows(); ++r) {
        add_row(lc->normals.row(r).transpose(), lc->offsets[r]);
      }
    }
  }
  covered_ = horizon;
}

void FeasibleSetSnapshot::add_row(const Vector& normal, double offset) {
  require(normal.size() == dimension(), ErrorCode::kPrecondition, "row dimension mismatch");
  require(normal.allFinite() && std::isfinite(offset), ErrorCode::kNumeric, "non-finite row");
  normals_.insert(normals_.end(), normal.data(), normal.data() + normal.size());
  offsets_.push_back(offset);
}

double FeasibleSetSnapshot::max_violation(const Vector& x) const {
  const int p = dimension();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rows(); ++k) {
    const double* a = normal(k);
    double ax = 0.0;
    for (int l = 0; l < p; ++l) ax += a[l] * x[l];
    worst = std::max(worst, ax - offsets_[k]);
  }
  return worst;
}

bool FeasibleSetSnapshot::contains(const Vector& x, double tolerance) const {
  const int p = dimension();
  for (int l = 0; l < p; ++l) {
    if (x[l] < box_.lower()[l] - tolerance || x[l] > box_.upper()[l] + tolerance) return false;
  }
  for (std::size_t k = 0; k < rows(); ++k) {
    const double* a = normal(k);
    double ax = 0.0;
    for (int l = 0; l < p; ++l) ax += a[l] * x[l];
    if (ax - offsets_[k] > tolerance) return false;
  }
  return true;
}

namespace {

// Halfspaces a_k y <= b_k in `dim` coordinates, row-major.
struct Rows {
  int dim = 0;
  std::vector<double> a;
  std::vector<double> b;

  std::size_t size() const { return b.size(); }
  const double* row(std::size_t k) const { return a.data() + k * dim; }
};

double slack_tolerance(const double* a, double b, const std::vector<double>& x) {
  double mag = std::abs(b);
  for (std::size_t l = 0; l < x.size(); ++l) mag += std::abs(a[l] * x[l]);
  return 1e-11 * (1.0 + mag);
}

std::vector<double> box_optimum(const std::vector<double>& c, const std::vector<double>& lo,
                                const std::vector<double>& hi) {
  std::vector<double> x(c.size());
  for (std::size_t l = 0; l < c.size(); ++l) x[l] = c[l] < 0.0 ? hi[l] : lo[l];
  return x;
}

// One coordinate: intersect the interval with every row at once.
std::optional<std::vector<double>> solve_interval(double c, double lo, double hi,
                                                  const Rows& rows, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    const double a = rows.a[k];
    const double b = rows.b[k];
    const double scale = 1e-12 * (1.0 + std::abs(b));
    if (a > scale) {
      hi = std::min(hi, b / a);
    } else if (a < -scale) {
      lo = std::max(lo, b / a);
    } else if (b < -1e-11 * (1.0 + std::abs(a))) {
      return std::nullopt;
    }
  }
  if (lo > hi) {
    if (lo - hi > 1e-9 * (1.0 + std::abs(lo) + std::abs(hi))) return std::nullopt;
    const double mid = 0.5 * (lo + hi);
    return std::vector<double>{mid};
  }
  return std::vector<double>{c < 0.0 ? hi : lo};
}

std::optional<std::vector<double>> seidel(const std::vector<double>& c,
                                          const std::vector<double>& lo,
                                          const std::vector<double>& hi, const Rows& rows,
                                          std::size_t count) {
  const int d = rows.dim;
  if (d == 1) return solve_interval(c[0], lo[0], hi[0], rows, count);

  std::vector<double> x = box_optimum(c, lo, hi);
  for (std::size_t k = 0; k < count; ++k) {
    const double* ak = rows.row(k);
    const double bk = rows.b[k];
    double ax = 0.0;
    for (int l = 0; l < d; ++l) ax += ak[l] * x[l];
    if (ax - bk <= slack_tolerance(ak, bk, x)) continue;

    // The optimum moves onto a_k y = b_k; eliminate the coordinate with the
    // largest coefficient.
    int j = 0;
    for (int l = 1; l < d; ++l) {
      if (std::abs(ak[l]) > std::abs(ak[j])) j = l;
    }
    const double pivot = ak[j];
    if (std::abs(pivot) < 1e-300) return std::nullopt;  // 0 <= b_k < 0
    auto reduce = [&](const double* a, double* out) {
      const double f = a[j] / pivot;
      for (int l = 0, m = 0; l < d; ++l) {
        if (l != j) out[m++] = a[l] - f * ak[l];
      }
      return f;
    };

    Rows sub;
    sub.dim = d - 1;
    sub.a.resize((k + 2) * sub.dim);
    sub.b.resize(k + 2);
    for (std::size_t r = 0; r < k; ++r) {
      const double f = reduce(rows.row(r), sub.a.data() + r * sub.dim);
      sub.b[r] = rows.b[r] - f * bk;
    }
    // lo_j <= x_j <= hi_j with x_j = (b_k - sum_{l != j} a_kl y_l) / a_kj.
    for (int l = 0, m = 0; l < d; ++l) {
      if (l == j) continue;
      sub.a[k * sub.dim + m] = -ak[l] / pivot;
      sub.a[(k + 1) * sub.dim + m] = ak[l] / pivot;
      ++m;
    }
    sub.b[k] = hi[j] - bk / pivot;
    sub.b[k + 1] = bk / pivot - lo[j];

    std::vector<double> sc(sub.dim), slo(sub.dim), shi(sub.dim);
    const double cf = c[j] / pivot;
    for (int l = 0, m = 0; l < d; ++l) {
      if (l == j) continue;
      sc[m] = c[l] - cf * ak[l];
      slo[m] = lo[l];
      shi[m] = hi[l];
      ++m;
    }
    // The two box rows go first so that the sub-problem starts inside them.
    std::rotate(sub.a.begin(), sub.a.begin() + k * sub.dim, sub.a.end());
    std::rotate(sub.b.begin(), sub.b.begin() + k, sub.b.end());

    std::optional<std::vector<double>> y = seidel(sc, slo, shi, sub, sub.size());
    if (!y) return std::nullopt;
    double rest = bk;
    for (int l = 0, m = 0; l < d; ++l) {
      if (l == j) continue;
      x[l] = (*y)[m++];
      rest -= ak[l] * x[l];
    }
    x[j] = std::clamp(rest / pivot, lo[j], hi[j]);
  }
  return x;
}

LinearMinimum exact_minimum(const Vector& c, const FeasibleSetSnapshot& snapshot,
                            std::uint64_t seed) {
  const int p = snapshot.dimension();
  const std::size_t k = snapshot.rows();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, Stream::kShuffle);
  rng.shuffle(std::span<std::size_t>(order));

  Rows rows;
  rows.dim = p;
  rows.a.resize(k * p);
  rows.b.resize(k);
  for (std::size_t r = 0; r < k; ++r) {
    std::copy_n(snapshot.normal(order[r]), p, rows.a.data() + r * p);
    rows.b[r] = snapshot.offset(order[r]);
  }
  const BoxSet& box = snapshot.box();
  std::vector<double> cv(c.data(), c.data() + p);
  std::vector<double> lo(box.lower().data(), box.lower().data() + p);
  std::vector<double> hi(box.upper().data(), box.upper().data() + p);
  std::optional<std::vector<double>> x = seidel(cv, lo, hi, rows, k);
  if (!x) raise(ErrorCode::kInfeasible, "the feasible set is empty");
  LinearMinimum out;
  out.point = project_box(Eigen::Map<const Vector>(x->data(), p), box);
  out.value = c.dot(out.point);
  return out;
}

// Largest theta in [0, 1] with anchor + theta (x - anchor) feasible.
Vector repair(const Vector& x, const Vector& anchor, const FeasibleSetSnapshot& snapshot) {
  const int p = snapshot.dimension();
  double theta = 1.0;
  for (std::size_t k = 0; k < snapshot.rows(); ++k) {
    const double* a = snapshot.normal(k);
    double ax = 0.0, aa = 0.0;
    for (int l = 0; l < p; ++l) {
      ax += a[l] * x[l];
      aa += a[l] * anchor[l];
    }
    const double b = snapshot.offset(k);
    if (ax > b) theta = std::min(theta, (b - aa) / (ax - aa));
  }
  return anchor + std::max(theta, 0.0) * (x - anchor);
}

LinearMinimum penalty_minimum(const Vector& c, const FeasibleSetSnapshot& snapshot,
                              const MinimizerOptions& options) {
  const int p = snapshot.dimension();
  const BoxSet& box = snapshot.box();
  const double cnorm = c.norm();
  const double tol = options.tolerance_scale * (1.0 + cnorm);
  Vector anchor = snapshot.slater() ? *snapshot.slater() : box.center();
  require(snapshot.contains(anchor), ErrorCode::kInfeasible,
          "the penalty method needs a feasible anchor point");
  LinearMinimum best{anchor, c.dot(anchor), 0};
  if (cnorm == 0.0) return best;

  const double rho = options.penalty_factor * cnorm;
  // Normalized steps; the length halves and x restarts from the best
  // feasible point whenever stall_window steps bring no improvement.
  double step = 0.5 * (box.upper() - box.lower()).norm();
  Vector x = anchor;
  int last_improvement = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Vector s = c;
    for (std::size_t k = 0; k < snapshot.rows(); ++k) {
      const double* a = snapshot.normal(k);
      double ax = 0.0;
      for (int l = 0; l < p; ++l) ax += a[l] * x[l];
      if (ax > snapshot.offset(k)) {
        for (int l = 0; l < p; ++l) s[l] += rho * a[l];
      }
    }
    const double sn = s.norm();
    if (sn == 0.0) break;
    x = project_box(x - (step / sn) * s, box);
    const Vector feasible = project_box(repair(x, anchor, snapshot), box);
    const double value = c.dot(feasible);
    if (value < best.value - 1e-3 * tol) last_improvement = it;
    if (value < best.value) best = LinearMinimum{feasible, value, it};
    if (it - last_improvement >= options.stall_window) {
      step *= 0.5;
      x = best.point;
      last_improvement = it;
      if (step * cnorm < tol) {
        best.iterations = it;
        return best;
      }
    }
  }
  std::ostringstream msg;
  msg << "penalty method did not settle within " << options.max_iterations
      << " iterations; best feasible value " << best.value;
  raise(ErrorCode::kConvergence, msg.str());
}

}  // namespace

LinearMinimum minimize_linear(const Vector& c, const FeasibleSetSnapshot& snapshot,
                              const MinimizerOptions& options) {
  require(c.size() == snapshot.dimension(), ErrorCode::kPrecondition,
          "objective dimension mismatch");
  require(c.allFinite(), ErrorCode::kNumeric, "non-finite objective");
  LinearMinimum out = options.method == MinimizerMethod::kExact
                          ? exact_minimum(c, snapshot, options.seed)
                          : penalty_minimum(c, snapshot, options);
  if (options.grid_cross_check && snapshot.dimension() <= 2) {
    const LinearMinimum grid = grid_minimize(c, snapshot);
    const double tol = 1e-3 * (1.0 + c.lpNorm<1>());
    if (out.value > grid.value + tol || grid.value - out.value > tol) {
      std::ostringstream msg;
      msg << "linear minimum " << out.value << " disagrees with grid search " << grid.value;
      raise(ErrorCode::kNumeric, msg.str());
    }
  }
  return out;
}

LinearMinimum grid_minimize(const Vector& c, const FeasibleSetSnapshot& snapshot,
                            int resolution, int refinements) {
  const int p = snapshot.dimension();
  require(p >= 1 && p <= 2, ErrorCode::kPrecondition, "grid search supports p <= 2 only");
  require(resolution >= 3, ErrorCode::kConfig, "grid resolution must be at least 3");
  const BoxSet& box = snapshot.box();
  Vector lo = box.lower();
  Vector hi = box.upper();
  std::optional<LinearMinimum> best;

  for (int level = 0; level <= refinements; ++level) {
    const Vector cell = (hi - lo) / (resolution - 1);
    const int ny = p == 2 ? resolution : 1;
    std::vector<std::pair<double, Vector>> nodes;
    nodes.reserve(static_cast<std::size_t>(resolution) * ny);
    for (int a = 0; a < resolution; ++a) {
      for (int b = 0; b < ny; ++b) {
        Vector x(p);
        x[0] = a + 1 == resolution ? hi[0] : lo[0] + a * cell[0];
        if (p == 2) x[1] = b + 1 == resolution ? hi[1] : lo[1] + b * cell[1];
        nodes.emplace_back(c.dot(x), std::move(x));
      }
    }
    std::optional<LinearMinimum> level_best;
    for (const auto& [value, x] : nodes) {
      if (snapshot.contains(x) && (!level_best || value < level_best->value)) {
        level_best = LinearMinimum{x, value, level};
      }
    }
    if (level_best && (!best || level_best->value < best->value)) best = level_best;
    if (!best) raise(ErrorCode::kInfeasible, "no feasible grid node");
    const Vector half = 0.125 * (hi - lo);
    lo = (best->point - half).cwiseMax(box.lower());
    hi = (best->point + half).cwiseMin(box.upper());
  }
  return *best;
}

}  // namespace dopd
