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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "dopd/campaign.hpp"
#include "dopd/compress.hpp"
#include "dopd/engine.hpp"
#include "dopd/experiment.hpp"
#include "dopd/graph.hpp"
#include "dopd/problem.hpp"

using namespace dopd;

namespace {

constexpr double kQuantizerBound = 0.5;          // |C(x) - x|_inf, Delta = 1
constexpr double kProjectionSlack = -1e-10;
constexpr double kGradientRelError = 1e-6;
constexpr double kRegretSlopeMax = 0.85;
constexpr double kCcvSlopeMax = 0.9;
constexpr double kCcvRelativeGap = 0.25;
constexpr double kRegretFactor = 1.5;
constexpr double kBitsRatio = 0.125;
constexpr int kFitPoints = 5;
constexpr int kDoublings = 3;
constexpr double kBudgetFast = 1.0;       // seconds, criteria 1, 2, 4
constexpr double kBudgetConsensus = 10.0;
constexpr double kBudgetCampaign = 120.0;
constexpr double kHalfWidth = 5.0;

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Ordinary least squares slope of log y on log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

bool in_box(const Vector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (!(std::abs(v[k]) <= kHalfWidth)) return false;
  return true;
}

// Recorded x, z, zhat outside X plus negative dual entries.
std::int64_t trace_violations(const RunHistory& h) {
  std::int64_t bad = 0;
  for (const RoundTrace& tr : h.traces) {
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      bad += !in_box(tr.points[i]) + !in_box(tr.primal[i]) + !in_box(tr.estimates[i]);
      bad += (tr.duals[i].array() < 0.0).count();
    }
  }
  return bad;
}

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

std::int64_t feasibility_total = 0;
std::int64_t feasibility_runs = 0;

void criterion_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  LocalizationConfig cfg;
  cfg.agents = 5;
  cfg.horizon = 200;
  cfg.seed = 1;
  const LocalizationProblem problem(generate_instance(cfg));
  const Schedule schedule = Schedule::polynomial(0.3, 0.01, 1.0, 0.5, 1.0);
  EngineOptions opt;
  opt.trace = true;
  SegmentTopology ta(5, 0.1, 1), tb(5, 0.1, 1);
  opt.algorithm = Algorithm::kCompressed;
  const RunHistory a = run(problem, ta, schedule, Compressor::identity(), 200, opt);
  opt.algorithm = Algorithm::kBaseline;
  const RunHistory b = run(problem, tb, schedule, Compressor::identity(), 200, opt);
  std::int64_t mismatches = 0;
  for (std::size_t t = 0; t < a.traces.size(); ++t) {
    for (int i = 0; i < 5; ++i) {
      mismatches += !same_bits(a.traces[t].points[i], b.traces[t].points[i]);
      mismatches += !same_bits(a.traces[t].primal[i], b.traces[t].primal[i]);
      mismatches += !same_bits(a.traces[t].duals[i], b.traces[t].duals[i]);
    }
  }
  const double elapsed = seconds_since(start);
  feasibility_total += trace_violations(a) + trace_violations(b);
  feasibility_runs += 2;
  const bool ok = a.traces.size() == 200 && b.traces.size() == 200 && mismatches == 0 &&
                  elapsed < kBudgetFast;
  report(1, ok, "identity compressor equals baseline",
         fmt("n=5 T=200: %lld mismatching states, %.3f s", static_cast<long long>(mismatches),
             elapsed));
}

void criterion_quantizer() {
  const auto start = std::chrono::steady_clock::now();
  const Compressor c = Compressor::rounding(1, 8);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  long long bad = 0;
  double worst = 0.0, worst_sq = 0.0;
  for (int s = 0; s < 100000; ++s) {
    Vector x(2);
    x << u(gen), u(gen);
    const Vector err = compress(c, x).value - x;
    const double inf = err.cwiseAbs().maxCoeff();
    worst = std::max(worst, inf);
    worst_sq = std::max(worst_sq, err.squaredNorm() / 2.0);
    if (inf > kQuantizerBound) ++bad;
  }
  const double elapsed = seconds_since(start);
  report(2, bad == 0 && worst_sq <= 0.25 && elapsed < kBudgetFast, "quantizer error bound",
         fmt("1e5 inputs: %lld violations, worst |e|_inf %.6f, worst per-coordinate e^2 %.6f "
             "(bound 0.25), %.3f s",
             bad, worst, worst_sq, elapsed));
}

void criterion_consensus() {
  const auto start = std::chrono::steady_clock::now();
  const int n = 10, window = 4;
  const double w = 1.0 / n;
  const double base = 1.0 - w / (4.0 * n * n);
  const double tau = 1.0 / (base * base);
  const double lambda = std::pow(base, 1.0 / window);
  std::mt19937_64 gen(3);
  long long bad = 0;
  double worst = -1.0;
  for (int k = 0; k < 100; ++k) {
    SegmentTopology topo(n, 0.1, 100 + k);
    const Round s = 1 + static_cast<Round>(gen() % 300);
    const Round len = 1 + static_cast<Round>(gen() % 60);
    Matrix psi = Matrix::Identity(n, n);
    for (Round t = 1; t < s + len; ++t) {
      const GraphRound g = topo.next(t);
      if (t < s) continue;
      psi = mixing_matrix(g).weights * psi;
    }
    const double dev = (psi.array() - 1.0 / n).abs().maxCoeff();
    const double bound = tau * std::pow(lambda, static_cast<double>(len - 1));
    worst = std::max(worst, dev - bound);
    if (dev > bound) ++bad;
  }
  const double elapsed = seconds_since(start);
  report(3, bad == 0 && elapsed < kBudgetConsensus, "consensus decay bound",
         fmt("n=10 B=4, 100 windows: %lld violations, worst dev-bound %.3e, %.3f s", bad, worst,
             elapsed));
}

void criterion_projection() {
  const auto start = std::chrono::steady_clock::now();
  const BoxSet box = BoxSet::cube(2, -kHalfWidth, kHalfWidth);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> in(-kHalfWidth, kHalfWidth), wide(-20.0, 20.0);
  long long bad = 0;
  double worst = 0.0;
  for (int s = 0; s < 10000; ++s) {
    Vector b(2), c(2), y(2);
    b << in(gen), in(gen);
    y << in(gen), in(gen);
    c << wide(gen), wide(gen);
    const Vector x = project_box(b - c, box);
    const double ineq = (y - b).squaredNorm() - (y - x).squaredNorm() - (x - b).squaredNorm() -
                        2.0 * (x - y).dot(c);
    const double bound = c.norm() - (x - b).norm();
    worst = std::min({worst, ineq, bound});
    if (ineq < kProjectionSlack || bound < kProjectionSlack) ++bad;
  }
  const double elapsed = seconds_since(start);
  report(4, bad == 0 && elapsed < kBudgetFast, "projection inequalities",
         fmt("1e4 triples: %lld violations, worst slack %.3e, %.3f s", bad, worst, elapsed));
}

void criterion_gradient() {
  LocalizationConfig cfg;
  cfg.agents = 10;
  cfg.horizon = 50;
  cfg.seed = 5;
  const LocalizationInstance inst = generate_instance(cfg);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> in(-kHalfWidth, kHalfWidth);
  long long bad = 0;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const int i = static_cast<int>(gen() % 10);
    const Round t = 1 + static_cast<Round>(gen() % 50);
    Vector x(2);
    x << in(gen), in(gen);
    const Vector g = localization_loss_gradient(inst, i, t, x);
    Vector fd(2);
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
      Vector up = x, down = x;
      up[k] += h;
      down[k] -= h;
      fd[k] = (localization_loss(inst, i, t, up) - localization_loss(inst, i, t, down)) / (2 * h);
    }
    const double rel = (g - fd).norm() / g.norm();
    worst = std::max(worst, rel);
    if (!(rel <= kGradientRelError)) ++bad;
  }
  report(5, bad == 0, "analytic gradient vs central differences",
         fmt("100 triples: %lld violations, worst relative error %.3e", bad, worst));
}

struct SeedRuns {
  RunReport poly_c, poly_b, geo_c, geo_b, margin;
};

RunReport run_preset(const Campaign& preset, const std::string& name, std::uint64_t seed) {
  for (RunConfig c : preset.runs) {
    if (c.name != name) continue;
    c.run.seed = seed;
    c.run.trace = true;
    RunReport r = execute_run(c);
    feasibility_total += trace_violations(r.history) + r.history.feasibility_violations;
    ++feasibility_runs;
    r.history.traces.clear();
    return r;
  }
  std::fprintf(stderr, "preset run %s missing\n", name.c_str());
  std::exit(2);
}

struct GrowthGate {
  double slope_reg = 0.0, slope_ccv = 0.0;
  bool reg_ratio_decreasing = true, ccv_ratio_decreasing = true;
};

GrowthGate growth(const RunReport& r) {
  const auto& cps = r.checkpoints;
  std::vector<double> t, reg, ccv;
  for (std::size_t k = cps.size() - kFitPoints; k < cps.size(); ++k) {
    t.push_back(static_cast<double>(cps[k].t));
    reg.push_back(std::abs(cps[k].net_regret));
    ccv.push_back(cps[k].net_ccv);
  }
  GrowthGate g;
  g.slope_reg = loglog_slope(t, reg);
  g.slope_ccv = loglog_slope(t, ccv);
  for (std::size_t k = cps.size() - kDoublings; k < cps.size(); ++k) {
    const double tn = static_cast<double>(cps[k].t), tp = static_cast<double>(cps[k - 1].t);
    if (!(std::abs(cps[k].net_regret) / tn < std::abs(cps[k - 1].net_regret) / tp))
      g.reg_ratio_decreasing = false;
    if (!(cps[k].net_ccv / tn < cps[k - 1].net_ccv / tp)) g.ccv_ratio_decreasing = false;
  }
  return g;
}

void growth_criteria(int id_reg, int id_ccv, const std::vector<const RunReport*>& runs,
                     const std::string& label, double elapsed) {
  bool reg_ok = true, ccv_ok = true;
  std::string reg_detail, ccv_detail;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const GrowthGate g = growth(*runs[s]);
    reg_ok = reg_ok && g.slope_reg <= kRegretSlopeMax && g.reg_ratio_decreasing;
    ccv_ok = ccv_ok && g.slope_ccv <= kCcvSlopeMax && g.ccv_ratio_decreasing;
    reg_detail += fmt("%sseed %zu slope %.3f%s", s ? "; " : "", s + 1, g.slope_reg,
                      g.reg_ratio_decreasing ? "" : " (ratio not decreasing)");
    ccv_detail += fmt("%sseed %zu slope %.3f%s", s ? "; " : "", s + 1, g.slope_ccv,
                      g.ccv_ratio_decreasing ? "" : " (ratio not decreasing)");
  }
  const bool fast = elapsed < kBudgetCampaign;
  if (id_ccv == 0) {
    report(id_reg, reg_ok && ccv_ok && fast, label,
           "|Net-Reg| " + reg_detail + " | Net-CCV " + ccv_detail + fmt(" | %.1f s", elapsed));
    return;
  }
  report(id_reg, reg_ok && fast, label + " regret",
         "|Net-Reg| " + reg_detail + fmt(" (gate %.2f) | %.1f s", kRegretSlopeMax, elapsed));
  report(id_ccv, ccv_ok && fast, label + " constraint violation",
         "Net-CCV " + ccv_detail + fmt(" (gate %.2f)", kCcvSlopeMax));
}

}  // namespace

int main() {
  criterion_oracle_equivalence();
  criterion_quantizer();
  criterion_consensus();
  criterion_projection();
  criterion_gradient();

  const Campaign preset = preset_paper_experiment(PresetScale::kDesk);
  const auto start = std::chrono::steady_clock::now();
  std::vector<SeedRuns> seeds;
  for (std::uint64_t seed : {1, 2, 3}) {
    seeds.push_back({run_preset(preset, "poly_compressed", seed),
                     run_preset(preset, "poly_baseline", seed),
                     run_preset(preset, "geo_compressed", seed),
                     run_preset(preset, "geo_baseline", seed),
                     run_preset(preset, "poly_compressed_b0.5", seed)});
  }
  const double elapsed = seconds_since(start);

  std::vector<const RunReport*> poly, geo;
  for (const SeedRuns& s : seeds) {
    poly.push_back(&s.poly_c);
    geo.push_back(&s.geo_c);
  }
  growth_criteria(6, 7, poly, "sublinear growth, polynomial schedule", elapsed);
  growth_criteria(8, 0, geo, "sublinear growth, geometric schedule", elapsed);

  {
    bool ok = true;
    std::string detail;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      for (const auto& [c, b, tag] :
           {std::tuple{&seeds[s].poly_c, &seeds[s].poly_b, "poly"},
            std::tuple{&seeds[s].geo_c, &seeds[s].geo_b, "geo"}}) {
        const CheckpointMetrics& fc = c->checkpoints.back();
        const CheckpointMetrics& fb = b->checkpoints.back();
        const double ccv_gap = std::abs(fc.net_ccv - fb.net_ccv) / (1.0 + fb.net_ccv);
        const double rc = std::abs(fc.net_regret), rb = std::abs(fb.net_regret);
        const double factor = std::max(rc, rb) / std::min(rc, rb);
        bool ratio_ok = c->checkpoints.size() == b->checkpoints.size();
        for (std::size_t k = 0; ratio_ok && k < c->checkpoints.size(); ++k) {
          ratio_ok = static_cast<double>(c->checkpoints[k].bits_sent) /
                         static_cast<double>(b->checkpoints[k].bits_sent) ==
                     kBitsRatio;
        }
        ok = ok && ccv_gap <= kCcvRelativeGap && factor <= kRegretFactor && ratio_ok;
        detail += fmt("%sseed %zu %s: CCV gap %.4f, Reg factor %.3f, bits %s", detail.empty() ? "" : "; ",
                      s + 1, tag, ccv_gap, factor, ratio_ok ? "0.125" : "MISMATCH");
      }
    }
    report(9, ok && elapsed < kBudgetCampaign, "compression keeps accuracy at 1/8 of the bits",
           detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double wide = seeds[s].margin.checkpoints.back().net_ccv;
      const double narrow = seeds[s].poly_c.checkpoints.back().net_ccv;
      ok = ok && wide <= narrow;
      detail += fmt("%sseed %zu: b=0.5 %.4f vs b=0.01 %.4f", s ? "; " : "", s + 1, wide, narrow);
    }
    report(10, ok, "larger Slater margin does not increase violation", detail);
  }

  report(11, feasibility_total == 0, "feasibility invariants",
         fmt("%lld runs: %lld states outside X or negative duals",
             static_cast<long long>(feasibility_runs), static_cast<long long>(feasibility_total)));

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
