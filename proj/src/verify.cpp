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

#include "dopd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dopd/box.hpp"
#include "dopd/compress.hpp"
#include "dopd/graph.hpp"
#include "dopd/problem.hpp"
#include "dopd/rng.hpp"

namespace dopd {

namespace {

std::string describe(const char* what, long long violations, double worst) {
  std::ostringstream s;
  s.precision(6);
  s << what << ": " << violations << " violations, worst " << worst;
  return s.str();
}

Vector uniform_vector(Rng& rng, int p, double lo, double hi) {
  Vector v(p);
  for (int k = 0; k < p; ++k) v[k] = rng.uniform(lo, hi);
  return v;
}

PropertyResult quantizer_bound(const VerifyOptions& o) {
  Rng rng(o.seed, Stream::kVerify, 1);
  const Compressor c = Compressor::rounding(1, 8);
  long long bad = 0;
  double worst = 0.0;
  for (int s = 0; s < o.quantizer_samples; ++s) {
    const Vector x = uniform_vector(rng, 2, -100.0, 100.0);
    const double err = (compress(c, x).value - x).lpNorm<Eigen::Infinity>();
    worst = std::max(worst, err);
    if (err * err > c.error_bound()) ++bad;
  }
  return {"quantizer error |C(x)-x|_inf^2 <= Delta^2/4", bad == 0,
          describe("rounding, Delta=1", bad, worst)};
}

PropertyResult dithered_bound(const VerifyOptions& o) {
  Rng rng(o.seed, Stream::kVerify, 2);
  const Compressor c = Compressor::dithered(1, 8);
  const double mean = verify_error_bound(c, o.quantizer_samples / 10, rng, 2, 100.0);
  return {"dithered quantizer mean squared error <= Delta^2", mean <= c.error_bound(),
          describe("dithered, Delta=1", mean <= c.error_bound() ? 0 : 1, mean)};
}

PropertyResult norm_equivalence_check(const VerifyOptions& o) {
  Rng rng(o.seed, Stream::kVerify, 3);
  long long bad = 0;
  double worst = 0.0;
  for (int p : {1, 2, 3, 5}) {
    for (double d : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
      const NormFactors f = norm_equivalence(p, d);
      for (int s = 0; s < 1000; ++s) {
        const Vector x = uniform_vector(rng, p, -10.0, 10.0);
        const double dn = std::isinf(d) ? x.lpNorm<Eigen::Infinity>()
                                        : std::pow(x.array().abs().pow(d).sum(), 1.0 / d);
        const double en = x.norm();
        const double slack = std::min(f.upper * en - dn, f.lower_inverse * dn - en);
        worst = std::min(worst, slack);
        if (slack < -1e-12 * (1.0 + en)) ++bad;
      }
    }
  }
  return {"norm equivalence |x|_d <= p_hat |x|, |x| <= p_tilde |x|_d", bad == 0,
          describe("p in {1,2,3,5}, d in {1,2,3,inf}", bad, worst)};
}

PropertyResult consensus_decay(const VerifyOptions& o) {
  long long bad = 0;
  double worst = -1.0;
  int disconnected = 0;
  for (int n : {5, 10}) {
    const int window = 4;
    Rng pick(o.seed, Stream::kVerify, 4 + n);
    for (int w = 0; w < o.consensus_windows; ++w) {
      const Round s = 1 + static_cast<Round>(pick.below(400));
      const int length = 1 + static_cast<int>(pick.below(41));
      Rng graph_rng(o.seed + 1000 * n + w, Stream::kGraph);
      std::vector<GraphRound> graphs;
      std::vector<MixingMatrix> mats;
      for (Round t = 1; t < s + length; ++t) {
        GraphRound g = generate_round_graph(n, 0.1, t, graph_rng);
        if (t >= s) {
          mats.push_back(mixing_matrix(g));
          graphs.push_back(std::move(g));
        }
      }
      for (std::size_t k = 0; k + window <= graphs.size(); ++k) {
        if (!check_b_connectivity(std::span(graphs).subspan(k, window))) ++disconnected;
      }
      const ConsensusConstants cc = consensus_constants(n, mats.front().floor, window);
      const double dev = consensus_decay_check(mats);
      const double bound = cc.tau * std::pow(cc.lambda, length - 1);
      worst = std::max(worst, dev - bound);
      if (dev > bound) ++bad;
    }
  }
  std::string detail = describe("n in {5,10}, B=4", bad, worst);
  detail += ", " + std::to_string(disconnected) + " disconnected windows";
  return {"consensus decay |[W_t...W_s]_ij - 1/n| <= tau lambda^(t-s)",
          bad == 0 && disconnected == 0, detail};
}

PropertyResult projection_inequalities(const VerifyOptions& o) {
  Rng rng(o.seed, Stream::kVerify, 20);
  const BoxSet box = BoxSet::cube(2, -5.0, 5.0);
  long long bad = 0;
  double worst = 0.0;
  for (int s = 0; s < o.projection_triples; ++s) {
    const Vector b = uniform_vector(rng, 2, -5.0, 5.0);
    const Vector y = uniform_vector(rng, 2, -5.0, 5.0);
    const Vector c = uniform_vector(rng, 2, -20.0, 20.0);
    const Vector x = project_box(b - c, box);
    const double lhs = 2.0 * (x - y).dot(c);
    const double rhs = (y - b).squaredNorm() - (y - x).squaredNorm() - (x - b).squaredNorm();
    const double slack = std::min(rhs - lhs, c.norm() - (x - b).norm());
    worst = std::min(worst, slack);
    if (slack < -1e-10) ++bad;
  }
  return {"projection inequalities 2<x-y,c> <= |y-b|^2-|y-x|^2-|x-b|^2, |x-b| <= |c|", bad == 0,
          describe("box [-5,5]^2", bad, worst)};
}

LocalizationInstance verify_instance(const VerifyOptions& o, double margin) {
  LocalizationConfig cfg;
  cfg.agents = 10;
  cfg.horizon = 50;
  cfg.margin = margin;
  cfg.seed = o.seed;
  return generate_instance(cfg);
}

PropertyResult gradient_check(const VerifyOptions& o) {
  const LocalizationInstance inst = verify_instance(o, 0.01);
  Rng rng(o.seed, Stream::kVerify, 21);
  const double h = 1e-5;
  long long bad = 0;
  double worst = 0.0;
  for (int s = 0; s < o.gradient_triples; ++s) {
    const int i = static_cast<int>(rng.below(inst.agents()));
    const Round t = 1 + static_cast<Round>(rng.below(inst.horizon()));
    const Vector x = uniform_vector(rng, 2, -5.0 + 2 * h, 5.0 - 2 * h);
    const Vector g = localization_loss_gradient(inst, i, t, x);
    Vector fd(2);
    for (int k = 0; k < 2; ++k) {
      Vector xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      fd[k] = (localization_loss(inst, i, t, xp) - localization_loss(inst, i, t, xm)) / (2 * h);
    }
    const double rel = (fd - g).norm() / std::max(g.norm(), fd.norm());
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) ++bad;
  }
  return {"loss gradient vs central differences, relative error <= 1e-6", bad == 0,
          describe("h=1e-5", bad, worst)};
}

PropertyResult bound_checks(const VerifyOptions& o) {
  const LocalizationInstance inst = verify_instance(o, 0.01);
  const ProblemBounds bounds = estimate_bounds(inst);
  Rng rng(o.seed, Stream::kVerify, 22);
  long long bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 2000; ++s) {
    const int i = static_cast<int>(rng.below(inst.agents()));
    const Round t = 1 + static_cast<Round>(rng.below(inst.horizon()));
    const Vector x = uniform_vector(rng, 2, -5.0, 5.0);
    const Vector y = uniform_vector(rng, 2, -5.0, 5.0);
    const Vector gx = localization_loss_gradient(inst, i, t, x);
    const Vector gy = localization_loss_gradient(inst, i, t, y);
    const double lip = (gx - gy).norm() / (x - y).norm();
    const double jac = localization_constraint(inst, i, t, x).jacobian.operatorNorm();
    const double excess = std::max({gx.norm() - bounds.gradient_bound, lip - bounds.lipschitz,
                                    jac - bounds.jacobian_bound_spectral});
    worst = std::max(worst, excess);
    if (excess > 1e-9) ++bad;
  }
  return {"sampled |grad f| <= G1, |grad g| <= G2, Lipschitz <= L", bad == 0,
          describe("2000 samples", bad, worst)};
}

PropertyResult slater_certificate(const VerifyOptions& o) {
  const LocalizationInstance inst = verify_instance(o, 0.01);
  const Vector origin = Vector::Zero(2);
  long long bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (Round t = 1; t <= inst.horizon(); ++t) {
    for (int i = 0; i < inst.agents(); ++i) {
      const double g = localization_constraint(inst, i, t, origin).value.maxCoeff();
      worst = std::max(worst, g);
      if (g > -0.01) ++bad;
    }
  }
  return {"Slater certificate max g_{i,t}(0) <= -b at b=0.01", bad == 0,
          describe("n=10, T=50", bad, worst)};
}

PropertyResult double_stochastic(const VerifyOptions& o) {
  Rng rng(o.seed, Stream::kGraph);
  long long bad = 0;
  for (Round t = 1; t <= 100; ++t) {
    const MixingMatrix w = mixing_matrix(generate_round_graph(10, 0.3, t, rng));
    try {
      validate_doubly_stochastic(w, 1e-12);
    } catch (const Error&) {
      ++bad;
    }
  }
  return {"mixing matrices doubly stochastic within 1e-12 with floor 1/n", bad == 0,
          describe("n=10, 100 rounds", bad, 0.0)};
}

}  // namespace

std::vector<PropertyResult> verify_properties(const VerifyOptions& options) {
  using Check = PropertyResult (*)(const VerifyOptions&);
  const std::pair<const char*, Check> suite[] = {
      {"quantizer error bound", quantizer_bound},
      {"dithered quantizer error bound", dithered_bound},
      {"norm equivalence", norm_equivalence_check},
      {"consensus decay", consensus_decay},
      {"projection inequalities", projection_inequalities},
      {"loss gradient", gradient_check},
      {"oracle bounds", bound_checks},
      {"Slater certificate", slater_certificate},
      {"double stochasticity", double_stochastic},
  };
  std::vector<PropertyResult> out;
  for (const auto& [name, check] : suite) {
    try {
      out.push_back(check(options));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

}  // namespace dopd
