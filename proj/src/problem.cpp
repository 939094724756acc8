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

#include "dopd/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dopd/rng.hpp"

namespace dopd {

int RoundProblem::total_constraints() const {
  int total = 0;
  for (int i = 0; i < agents(); ++i) total += constraint_count(i);
  return total;
}

namespace {

constexpr double kSensorRange = 10.0;
constexpr double kNoiseMax = 0.001;
constexpr double kNormalMax = 2.0;

std::size_t slot(const LocalizationInstance& instance, int agent, Round t) {
  if (agent < 0 || agent >= instance.agents()) {
    raise(ErrorCode::kIndex, "agent index " + std::to_string(agent) + " out of range");
  }
  if (t < 1 || t > instance.horizon()) {
    raise(ErrorCode::kIndex, "round " + std::to_string(t) + " outside materialized horizon");
  }
  return static_cast<std::size_t>(t - 1) * instance.agents() + agent;
}

void require_in_box(const LocalizationInstance& instance, const Vector& x) {
  const double w = instance.config.box_half_width;
  require(x.size() == instance.dimension(), ErrorCode::kPrecondition,
          "point has wrong dimension");
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!(x[k] >= -w && x[k] <= w)) raise(ErrorCode::kPrecondition, "point lies outside X");
  }
}

}  // namespace

BoxSet LocalizationInstance::box() const {
  return BoxSet::cube(config.dimension, -config.box_half_width, config.box_half_width);
}

double LocalizationInstance::distance(int agent, Round t) const {
  const std::size_t k = slot(*this, agent, t);
  return (sensors[agent] - targets[t]).squaredNorm() + noise[k];
}

const Matrix& LocalizationInstance::normal(int agent, Round t) const {
  return normals[slot(*this, agent, t)];
}

const Vector& LocalizationInstance::offset(int agent, Round t) const {
  return offsets[slot(*this, agent, t)];
}

bool identical(const LocalizationInstance& a, const LocalizationInstance& b) {
  const auto same_vectors = [](const auto& u, const auto& v) {
    if (u.size() != v.size()) return false;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k].rows() != v[k].rows() || u[k].cols() != v[k].cols()) return false;
      if (!(u[k].array() == v[k].array()).all()) return false;
    }
    return true;
  };
  const LocalizationConfig& x = a.config;
  const LocalizationConfig& y = b.config;
  return x.agents == y.agents && x.dimension == y.dimension &&
         x.constraints_per_agent == y.constraints_per_agent && x.margin == y.margin &&
         x.box_half_width == y.box_half_width && x.horizon == y.horizon && x.seed == y.seed &&
         x.allow_no_slater == y.allow_no_slater && a.steps == b.steps && a.noise == b.noise &&
         same_vectors(a.sensors, b.sensors) && same_vectors(a.targets, b.targets) &&
         same_vectors(a.normals, b.normals) && same_vectors(a.offsets, b.offsets);
}

Vector initial_target(int dimension) {
  Vector x = Vector::Zero(dimension);
  x[0] = 0.8;
  if (dimension > 1) x[1] = 0.95;
  return x;
}

Vector target_increment(Round t, bool step, int dimension) {
  require(t >= 1, ErrorCode::kPrecondition, "target dynamics start at round 1");
  const double td = static_cast<double>(t);
  Vector inc = Vector::Zero(dimension);
  inc[0] = (step ? -1.0 : 1.0) * std::sin(td / 50.0) / (10.0 * td);
  if (dimension > 1) inc[1] = -(step ? 1.0 : 0.0) * std::cos(td / 70.0) / (40.0 * td);
  return inc;
}

Vector advance_target(const Vector& current, Round t, bool step) {
  return current + target_increment(t, step, static_cast<int>(current.size()));
}

LocalizationInstance generate_instance(const LocalizationConfig& config) {
  require(config.agents >= 1, ErrorCode::kConfig, "need at least one agent");
  require(config.dimension >= 1, ErrorCode::kConfig, "dimension must be positive");
  require(config.constraints_per_agent >= 1, ErrorCode::kConfig,
          "constraints per agent must be positive");
  require(config.horizon >= 0, ErrorCode::kConfig, "horizon must be non-negative");
  require(config.box_half_width > 0.0, ErrorCode::kConfig, "box half width must be positive");
  require(std::isfinite(config.margin), ErrorCode::kConfig, "margin must be finite");
  if (config.margin <= 0.0 && !config.allow_no_slater) {
    raise(ErrorCode::kConfig,
          "margin b <= 0 breaks the Slater certificate; set allow_no_slater to run it");
  }

  LocalizationInstance inst;
  inst.config = config;
  const int n = config.agents;
  const int p = config.dimension;
  const int m = config.constraints_per_agent;
  const auto rounds = static_cast<std::size_t>(config.horizon);

  Rng sensor_rng(config.seed, Stream::kSensors);
  inst.sensors.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector s(p);
    for (int k = 0; k < p; ++k) s[k] = sensor_rng.uniform(-kSensorRange, kSensorRange);
    inst.sensors.push_back(std::move(s));
  }

  Rng step_rng(config.seed, Stream::kTargetSteps);
  inst.steps.resize(rounds);
  for (auto& q : inst.steps) q = step_rng.bernoulli(0.5) ? 1 : 0;

  // X_{0,1} = X_{0,0}; the increment formula is undefined at t = 0.
  inst.targets.reserve(rounds + 1);
  inst.targets.push_back(initial_target(p));
  if (rounds > 0) inst.targets.push_back(inst.targets.front());
  for (Round t = 1; t < config.horizon; ++t) {
    inst.targets.push_back(advance_target(inst.targets.back(), t, inst.steps[t - 1] != 0));
  }

  Rng noise_rng(config.seed, Stream::kNoise);
  inst.noise.resize(rounds * n);
  for (double& tau : inst.noise) tau = noise_rng.uniform(0.0, kNoiseMax);

  Rng constraint_rng(config.seed, Stream::kConstraints);
  inst.normals.reserve(rounds * n);
  inst.offsets.reserve(rounds * n);
  for (std::size_t k = 0; k < rounds * n; ++k) {
    Matrix bmat(m, p);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < p; ++c) bmat(r, c) = constraint_rng.uniform(0.0, kNormalMax);
    }
    Vector bvec(m);
    for (int r = 0; r < m; ++r) bvec[r] = constraint_rng.uniform(config.margin, config.margin + 1.0);
    inst.normals.push_back(std::move(bmat));
    inst.offsets.push_back(std::move(bvec));
  }
  return inst;
}

double localization_loss(const LocalizationInstance& instance, int agent, Round t,
                         const Vector& x) {
  const double d = instance.distance(agent, t);
  require_in_box(instance, x);
  const double r = (instance.sensors[agent] - x).squaredNorm() - d;
  return 0.25 * r * r;
}

Vector localization_loss_gradient(const LocalizationInstance& instance, int agent, Round t,
                                  const Vector& x) {
  const double d = instance.distance(agent, t);
  require_in_box(instance, x);
  const Vector diff = x - instance.sensors[agent];
  return (diff.squaredNorm() - d) * diff;
}

ConstraintEval localization_constraint(const LocalizationInstance& instance, int agent, Round t,
                                       const Vector& x) {
  const Matrix& bmat = instance.normal(agent, t);
  require(x.size() == bmat.cols(), ErrorCode::kPrecondition, "constraint: dimension mismatch");
  require_in_box(instance, x);
  return ConstraintEval{bmat * x - instance.offset(agent, t), bmat};
}

ProblemBounds estimate_bounds(const LocalizationInstance& instance) {
  ProblemBounds out;
  const double w = instance.config.box_half_width;
  for (int i = 0; i < instance.agents(); ++i) {
    const Vector& s = instance.sensors[i];
    double far2 = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      const double e = std::max(std::abs(-w - s[k]), std::abs(w - s[k]));
      far2 += e * e;
    }
    for (Round t = 1; t <= instance.horizon(); ++t) {
      const double d = instance.distance(i, t);
      const double residual = std::max(far2 - d, d);
      out.gradient_bound = std::max(out.gradient_bound, residual * std::sqrt(far2));
      out.lipschitz = std::max(out.lipschitz, std::max(3.0 * far2 - d, d));
    }
  }
  for (const Matrix& bmat : instance.normals) {
    Eigen::JacobiSVD<Matrix> svd(bmat);
    out.jacobian_bound_spectral = std::max(out.jacobian_bound_spectral, svd.singularValues()[0]);
    out.jacobian_bound_frobenius = std::max(out.jacobian_bound_frobenius, bmat.norm());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr const char* kInstanceMagic = "dopd-instance";
constexpr int kInstanceVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    raise(ErrorCode::kParse, "instance: malformed number '" + token + "'");
  }
  return v;
}

long long parse_int(const std::string& token) {
  char* end = nullptr;
  const long long v = std::strtoll(token.c_str(), &end, 10);
  if (token.empty() || end != token.c_str() + token.size()) {
    raise(ErrorCode::kParse, "instance: malformed integer '" + token + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& token) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (token.empty() || token[0] == '-' || end != token.c_str() + token.size()) {
    raise(ErrorCode::kParse, "instance: malformed unsigned integer '" + token + "'");
  }
  return v;
}

}  // namespace

void write_instance(std::ostream& out, const LocalizationInstance& inst) {
  const LocalizationConfig& c = inst.config;
  out << kInstanceMagic << ' ' << kInstanceVersion << '\n';
  out << "agents " << c.agents << '\n';
  out << "dimension " << c.dimension << '\n';
  out << "constraints_per_agent " << c.constraints_per_agent << '\n';
  out << "margin " << hex(c.margin) << '\n';
  out << "box_half_width " << hex(c.box_half_width) << '\n';
  out << "horizon " << c.horizon << '\n';
  out << "seed " << c.seed << '\n';
  out << "allow_no_slater " << (c.allow_no_slater ? 1 : 0) << '\n';
  for (int i = 0; i < c.agents; ++i) {
    out << "sensor " << i;
    for (double v : inst.sensors[i]) out << ' ' << hex(v);
    out << '\n';
  }
  for (Round t = 1; t <= c.horizon; ++t) {
    out << "step " << t << ' ' << static_cast<int>(inst.steps[t - 1]) << '\n';
  }
  for (Round t = 0; t <= c.horizon && t < static_cast<Round>(inst.targets.size()); ++t) {
    out << "target " << t;
    for (double v : inst.targets[t]) out << ' ' << hex(v);
    out << '\n';
  }
  for (Round t = 1; t <= c.horizon; ++t) {
    for (int i = 0; i < c.agents; ++i) {
      const std::size_t k = static_cast<std::size_t>(t - 1) * c.agents + i;
      out << "noise " << t << ' ' << i << ' ' << hex(inst.noise[k]) << '\n';
      out << "normal " << t << ' ' << i;
      const Matrix& bmat = inst.normals[k];
      for (int r = 0; r < bmat.rows(); ++r) {
        for (int col = 0; col < bmat.cols(); ++col) out << ' ' << hex(bmat(r, col));
      }
      out << '\n';
      out << "offset " << t << ' ' << i;
      for (double v : inst.offsets[k]) out << ' ' << hex(v);
      out << '\n';
    }
  }
  if (!out) raise(ErrorCode::kIo, "failed to write instance");
}

LocalizationInstance read_instance(std::istream& in) {
  LocalizationInstance inst;
  LocalizationConfig& c = inst.config;
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::kParse, "instance: empty input");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kInstanceMagic || version != kInstanceVersion) {
      raise(ErrorCode::kParse, "instance: unrecognized header '" + line + "'");
    }
  }

  bool sized = false;
  std::size_t seen_sensors = 0, seen_steps = 0, seen_targets = 0, seen_noise = 0,
              seen_normals = 0, seen_offsets = 0;
  const auto allocate = [&] {
    if (sized) return;
    require(c.agents >= 1 && c.dimension >= 1 && c.constraints_per_agent >= 1 && c.horizon >= 0,
            ErrorCode::kParse, "instance: header fields missing or invalid");
    const auto rounds = static_cast<std::size_t>(c.horizon);
    inst.sensors.assign(c.agents, Vector());
    inst.steps.assign(rounds, 0);
    inst.targets.assign(rounds > 0 ? rounds + 1 : 1, Vector());
    inst.noise.assign(rounds * c.agents, 0.0);
    inst.normals.assign(rounds * c.agents, Matrix());
    inst.offsets.assign(rounds * c.agents, Vector());
    sized = true;
  };
  const auto read_vector = [](std::istringstream& fields, int size) {
    Vector v(size);
    for (int k = 0; k < size; ++k) {
      std::string tok;
      if (!(fields >> tok)) raise(ErrorCode::kParse, "instance: truncated vector");
      v[k] = parse_double(tok);
    }
    return v;
  };
  const auto round_agent = [&](std::istringstream& fields) {
    std::string ts, is;
    fields >> ts >> is;
    const long long t = parse_int(ts);
    const long long i = parse_int(is);
    if (t < 1 || t > c.horizon || i < 0 || i >= c.agents) {
      raise(ErrorCode::kParse, "instance: (round, agent) out of range");
    }
    return static_cast<std::size_t>(t - 1) * c.agents + static_cast<std::size_t>(i);
  };

  c.agents = 0;
  c.dimension = 0;
  c.constraints_per_agent = 0;
  c.horizon = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string key, value;
    fields >> key;
    if (key == "agents" || key == "dimension" || key == "constraints_per_agent" ||
        key == "horizon" || key == "seed" || key == "allow_no_slater" || key == "margin" ||
        key == "box_half_width") {
      if (sized) raise(ErrorCode::kParse, "instance: header field after data: " + key);
      fields >> value;
      if (key == "agents") c.agents = static_cast<int>(parse_int(value));
      else if (key == "dimension") c.dimension = static_cast<int>(parse_int(value));
      else if (key == "constraints_per_agent") c.constraints_per_agent = static_cast<int>(parse_int(value));
      else if (key == "horizon") c.horizon = parse_int(value);
      else if (key == "seed") c.seed = parse_unsigned(value);
      else if (key == "allow_no_slater") c.allow_no_slater = parse_int(value) != 0;
      else if (key == "margin") c.margin = parse_double(value);
      else c.box_half_width = parse_double(value);
      continue;
    }
    allocate();
    if (key == "sensor") {
      fields >> value;
      const long long i = parse_int(value);
      if (i < 0 || i >= c.agents) raise(ErrorCode::kParse, "instance: sensor index out of range");
      inst.sensors[i] = read_vector(fields, c.dimension);
      ++seen_sensors;
    } else if (key == "step") {
      std::string ts;
      fields >> ts >> value;
      const long long t = parse_int(ts);
      if (t < 1 || t > c.horizon) raise(ErrorCode::kParse, "instance: step round out of range");
      inst.steps[t - 1] = parse_int(value) != 0 ? 1 : 0;
      ++seen_steps;
    } else if (key == "target") {
      fields >> value;
      const long long t = parse_int(value);
      if (t < 0 || t >= static_cast<long long>(inst.targets.size())) {
        raise(ErrorCode::kParse, "instance: target round out of range");
      }
      inst.targets[t] = read_vector(fields, c.dimension);
      ++seen_targets;
    } else if (key == "noise") {
      const std::size_t k = round_agent(fields);
      fields >> value;
      inst.noise[k] = parse_double(value);
      ++seen_noise;
    } else if (key == "normal") {
      const std::size_t k = round_agent(fields);
      const Vector flat = read_vector(fields, c.constraints_per_agent * c.dimension);
      Matrix bmat(c.constraints_per_agent, c.dimension);
      for (int r = 0; r < bmat.rows(); ++r) {
        for (int col = 0; col < bmat.cols(); ++col) bmat(r, col) = flat[r * c.dimension + col];
      }
      inst.normals[k] = std::move(bmat);
      ++seen_normals;
    } else if (key == "offset") {
      const std::size_t k = round_agent(fields);
      inst.offsets[k] = read_vector(fields, c.constraints_per_agent);
      ++seen_offsets;
    } else {
      raise(ErrorCode::kParse, "instance: unknown field '" + key + "'");
    }
  }
  allocate();
  const std::size_t cells = static_cast<std::size_t>(c.horizon) * c.agents;
  if (seen_sensors != static_cast<std::size_t>(c.agents) ||
      seen_steps != static_cast<std::size_t>(c.horizon) || seen_targets != inst.targets.size() ||
      seen_noise != cells || seen_normals != cells || seen_offsets != cells) {
    raise(ErrorCode::kParse, "instance: missing records");
  }
  return inst;
}

// ---------------------------------------------------------------------------

LocalizationProblem::LocalizationProblem(LocalizationInstance instance)
    : instance_(std::move(instance)),
      box_(instance_.box()),
      bounds_(estimate_bounds(instance_)) {}

double LocalizationProblem::loss(int agent, Round t, const Vector& x) const {
  return localization_loss(instance_, agent, t, x);
}

Vector LocalizationProblem::loss_gradient(int agent, Round t, const Vector& x) const {
  return localization_loss_gradient(instance_, agent, t, x);
}

ConstraintEval LocalizationProblem::constraint(int agent, Round t, const Vector& x) const {
  return localization_constraint(instance_, agent, t, x);
}

std::optional<LinearConstraints> LocalizationProblem::linear_constraints(int agent,
                                                                         Round t) const {
  return LinearConstraints{instance_.normal(agent, t), instance_.offset(agent, t)};
}

std::optional<Vector> LocalizationProblem::slater_point() const {
  // g_{i,t}(0) = -b_{i,t} <= -margin.
  if (instance_.config.margin > 0.0) return Vector::Zero(instance_.dimension());
  return std::nullopt;
}

}  // namespace dopd
