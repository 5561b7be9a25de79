// Copyright 2026 The qmlab Authors
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

#include "qmlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "qmlab/error.hpp"
#include "qmlab/fit.hpp"
#include "qmlab/io.hpp"
#include "qmlab/parallel.hpp"

namespace qmlab {
namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Check verdict_check(const std::string& name, bool ok, const std::string& detail) {
  return {name, ok ? Verdict::kPass : Verdict::kFail, detail};
}

Check inconclusive(const std::string& name, const std::string& detail) {
  return {name, Verdict::kInconclusive, detail};
}

std::string h_tag(double h) { return "h" + std::to_string(std::lround(1.0 / h)); }

std::vector<std::uint8_t> text_bytes(const std::string& s) { return {s.begin(), s.end()}; }

json params_json(const ProblemParams& p) {
  return {{"h", p.h}, {"k", p.k}, {"kappa", p.kappa}, {"a", p.a}, {"c0", p.c0},
          {"a_kappa_sq", p.a_kappa_sq()}};
}

ProblemParams at_h(const ExperimentPlan& plan, double h) {
  ProblemParams p = plan.problem;
  p.h = h;
  return p;
}

EvolveOptions evolve_options(const ExperimentPlan& plan, double h) {
  EvolveOptions o;
  o.dt = plan.dt_over_h * h;
  o.samples = plan.samples;
  o.alpha = 1.0;
  return o;
}

CascadeSolution cascade_at(const ExperimentPlan& plan, double kappa, int k) {
  ProblemParams p = plan.problem;
  p.kappa = kappa;
  p.k = k;
  p.validate();
  return solve_cascade(p, plan.plane, plan.cascade, plan.ground);
}

double max_abs_edge(const ComplexPlane& v) {
  const Eigen::Index n = v.rows();
  return std::max(v.row(0).cwiseAbs().maxCoeff(), v.row(n - 1).cwiseAbs().maxCoeff());
}

double parity_defect(const PlaneField& v, bool odd) {
  const PlaneField m = v.reflect_rho();
  return norm_l2(odd ? v + m : v - m);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list_string(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + strf("%.6g", v[i]);
  return s;
}

// Indices of h_list sorted from the largest h to the smallest.
std::vector<int> by_decreasing_h(const std::vector<double>& hs) {
  std::vector<int> idx(hs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return hs[a] > hs[b]; });
  return idx;
}

double rate_constant(const ExperimentPlan& plan) {
  return 2.0 * fitted_e0_slope(plan.problem.a_kappa_sq(), plan);
}

double epsilon_for(const ExperimentPlan& plan, double h, double c0_rate) {
  const double t_h = plan.t_horizon(h);
  const double rate = c0_rate * std::abs(plan.problem.a) * plan.problem.kappa * t_h;
  switch (plan.epsilon_rule) {
    case EpsilonRule::kSqrtH:
      return plan.epsilon_scale * std::sqrt(h);
    case EpsilonRule::kInverseSqrtRate:
      require(rate > 0.0, "epsilon rule needs a nonzero rate");
      return plan.epsilon_scale / std::sqrt(rate);
    case EpsilonRule::kPiOverRate:
      require(rate > 0.0, "epsilon rule needs a nonzero rate");
      return plan.epsilon_scale * kPi / rate;
  }
  return 0.0;
}

// Two single-mode evolutions at amplitudes kappa and kappa + eps on a shared
// window, compared sample by sample.
struct PairRun {
  std::vector<double> times;
  std::vector<double> separation;  // |u' - u| in L^2(R^3)
  std::vector<double> oracle;      // |exp(-i dl t) f' - f|
  std::vector<double> d_pr;
  double delta_lambda = 0.0;
  double norm0 = 0.0;
};

PairRun run_pair(const ExperimentPlan& plan, const CascadeSolution& base,
                 const CascadeSolution& shifted, double h, double eps, double t_end) {
  const ProblemParams p = at_h(plan, h);
  ProblemParams q = p;
  q.kappa = p.kappa + eps;
  q.validate();
  const CylGrid grid = evolution_grid(p);
  const Quasimode u = build_quasimode(base, p, grid);
  const Quasimode v = build_quasimode(shifted, q, grid);
  const EvolveOptions opts = evolve_options(plan, h);

  std::vector<ComplexPlane> first;
  evolve(u.profile, p, t_end, opts,
         [&](int, double, const CylField& f) { first.push_back(f.values); });

  PairRun run;
  run.delta_lambda = v.lambda - u.lambda;
  run.norm0 = cyl_norm(u.profile);
  const Complex c = cyl_inner(u.profile, v.profile);
  const double nu = cyl_norm(u.profile), nv = cyl_norm(v.profile);
  evolve(v.profile, q, t_end, opts, [&](int i, double t, const CylField& f) {
    const CylField g{grid, first[i]};
    run.times.push_back(t);
    run.separation.push_back(cyl_norm({grid, f.values - g.values}));
    run.d_pr.push_back(projective_distance(cyl_inner(g, f), cyl_norm(g), cyl_norm(f)));
    const double phase = run.delta_lambda * t;
    const double s2 = nu * nu + nv * nv - 2.0 * (std::polar(1.0, -phase) * c).real();
    run.oracle.push_back(std::sqrt(std::max(0.0, s2)));
  });
  return run;
}

void sanity_check(ExperimentReport& rep) {
  bool ok = true;
  std::string bad;
  for (const auto& r : rep.per_h) {
    for (double d : {r.d_pr_initial, r.d_pr_peak})
      if (!std::isnan(d) && !(d >= 0.0 && d <= kPi / 2 + 1e-15)) ok = false, bad = "d_pr";
    if (!std::isnan(r.ratio) && !std::isfinite(r.ratio)) ok = false, bad = "ratio";
  }
  if (!rep.per_h.empty())
    rep.checks.push_back(verdict_check("reported values in range", ok,
                                       ok ? "distances in [0, pi/2], ratios finite"
                                          : "out of range: " + bad));
}

json check_json(const Check& c) {
  return {{"name", c.name}, {"verdict", verdict_name(c.verdict)}, {"detail", c.detail}};
}

json record_json(const HRecord& r) {
  return {{"h", r.h},
          {"t_h", r.t_h},
          {"epsilon", r.epsilon},
          {"initial_separation", r.initial_separation},
          {"peak_separation", r.peak_separation},
          {"peak_time", r.peak_time},
          {"predicted_peak_time", r.predicted_peak_time},
          {"ratio", r.ratio},
          {"fitted_slope", r.fitted_slope},
          {"fit_r2", r.fit_r2},
          {"d_pr_initial", r.d_pr_initial},
          {"d_pr_peak", r.d_pr_peak},
          {"cross_term_max", r.cross_term_max},
          {"err_final", r.err_final},
          {"mass_drift_rate", r.mass_drift_rate}};
}

}  // namespace

// ---------------------------------------------------------------- names

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

namespace {
struct KindName {
  ExperimentKind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {ExperimentKind::kGroundState, "ground-state"},
    {ExperimentKind::kCascade, "cascade"},
    {ExperimentKind::kQuasimode, "quasimode"},
    {ExperimentKind::kResidualScaling, "residual-scaling"},
    {ExperimentKind::kEvolve, "evolve"},
    {ExperimentKind::kGeometricRate, "geometric-rate"},
    {ExperimentKind::kGeometricBlowup, "geometric-blowup"},
    {ExperimentKind::kProjective, "projective"},
};

bool timed(ExperimentKind k) {
  return k == ExperimentKind::kEvolve || k == ExperimentKind::kGeometricRate ||
         k == ExperimentKind::kGeometricBlowup || k == ExperimentKind::kProjective;
}

bool swept(ExperimentKind k) { return timed(k) || k == ExperimentKind::kResidualScaling; }
}  // namespace

const char* kind_name(ExperimentKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& e : kKinds)
    if (name == e.name) return e.kind;
  fail(ErrorCode::kInvalidArgument, "unknown command '" + name + "'");
}

const char* schedule_name(TimeSchedule s) {
  switch (s) {
    case TimeSchedule::kFixed: return "fixed";
    case TimeSchedule::kAlphaLog: return "alpha_log";
    case TimeSchedule::kBetaLogLog: return "beta_loglog";
    case TimeSchedule::kSqrtLog: return "sqrt_log";
  }
  return "?";
}

const char* epsilon_rule_name(EpsilonRule r) {
  switch (r) {
    case EpsilonRule::kSqrtH: return "sqrt_h";
    case EpsilonRule::kInverseSqrtRate: return "inverse_sqrt_rate";
    case EpsilonRule::kPiOverRate: return "pi_over_rate";
  }
  return "?";
}

// ---------------------------------------------------------------- plan

double ExperimentPlan::t_horizon(double h) const {
  const double l = std::log(1.0 / h);
  switch (schedule) {
    case TimeSchedule::kFixed: return schedule_param;
    case TimeSchedule::kAlphaLog: return schedule_param * l;
    case TimeSchedule::kBetaLogLog: return l > 1.0 ? schedule_param * std::log(l) : 0.0;
    case TimeSchedule::kSqrtLog: return std::sqrt(l);
  }
  return 0.0;
}

void ExperimentPlan::validate() const {
  plane.validate();
  problem.validate();
  require(n_r >= 16, "cylinder.n_r must be at least 16");
  require(samples >= 1, "evolve.samples must be positive");
  require(dt_over_h > 0.0 && dt_over_h <= 0.1, "evolve.dt_over_h must lie in (0, 0.1]");
  require(checkpoint_every >= 0, "evolve.checkpoint_every must be non-negative");
  require(window_lo < window_hi, "experiment window is empty");
  require(epsilon_scale > 0.0, "experiment.epsilon_scale must be positive");
  for (double b : a_kappa_sq_list)
    require(std::abs(b) <= problem.c0 * (1.0 + 1e-12),
            strf("a kappa^2 = %g exceeds c0 = %g", b, problem.c0));
  if (!swept(kind)) return;
  require(!h_list.empty(), "experiment.h_list is empty");
  for (double h : h_list) {
    ProblemParams p = problem;
    p.h = h;
    p.validate();
    if (!timed(kind)) continue;
    const double t = t_horizon(h);
    const double guard = std::log(1.0 / h);
    require(t > 0.0, strf("time horizon at h = %g is not positive", h));
    require(t < guard, strf("t_h = %g must stay below log(1/h) = %g at h = %g", t, guard, h));
  }
}

json ExperimentPlan::to_json() const {
  json j = {{"kind", kind_name(kind)},
            {"problem", params_json(problem)},
            {"plane",
             {{"extent_rho", plane.extent_rho},
              {"extent_sigma", plane.extent_sigma},
              {"n_rho", plane.n_rho},
              {"n_sigma", plane.n_sigma}}},
            {"ground_state",
             {{"tol", ground.tol}, {"tau", ground.tau}, {"max_iters", ground.max_iters}}},
            {"cascade",
             {{"tol", cascade.tol},
              {"max_iters", cascade.max_iters},
              {"gap_delta", cascade.gap_delta},
              {"eig_tol", cascade.eig_tol}}},
            {"n_r", n_r}};
  if (!a_kappa_sq_list.empty()) j["a_kappa_sq_list"] = a_kappa_sq_list;
  if (swept(kind)) j["h_list"] = h_list;
  if (timed(kind)) {
    j["schedule"] = schedule_name(schedule);
    j["schedule_param"] = schedule_param;
    j["epsilon_rule"] = epsilon_rule_name(epsilon_rule);
    j["epsilon_scale"] = epsilon_scale;
    j["dt_over_h"] = dt_over_h;
    j["samples"] = samples;
    j["checkpoint_every"] = checkpoint_every;
    j["window"] = {window_lo, window_hi};
  }
  return j;
}

ExperimentPlan plan_from_config(ExperimentKind kind, const Config& cfg) {
  ExperimentPlan plan;
  plan.kind = kind;
  ProblemParams& p = plan.problem;
  p.kappa = 1.0;
  p.a = 0.05;
  const std::vector<double> sweep{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  switch (kind) {
    case ExperimentKind::kGroundState:
      p.a = 0.0;
      plan.a_kappa_sq_list = {-0.05, -0.025, -0.0125, 0.0125, 0.025, 0.05};
      break;
    case ExperimentKind::kCascade:
    case ExperimentKind::kQuasimode:
      break;
    case ExperimentKind::kResidualScaling:
      p.k = 4;
      plan.h_list = sweep;
      break;
    case ExperimentKind::kEvolve:
      p.k = 4;
      plan.h_list = sweep;
      plan.schedule_param = 1.0;
      plan.checkpoint_every = 10;
      break;
    case ExperimentKind::kGeometricRate:
      p.kappa = 0.5;
      p.a = 20.0;
      p.c0 = 30.0;
      plan.h_list = {1.0 / 16, 1.0 / 32, 1.0 / 64};
      plan.schedule_param = 2.0;
      break;
    case ExperimentKind::kGeometricBlowup:
      p.kappa = 0.5;
      p.a = 40.0;
      p.c0 = 30.0;
      plan.h_list = {1.0 / 16, 1.0 / 32, 1.0 / 64};
      plan.schedule = TimeSchedule::kSqrtLog;
      plan.epsilon_rule = EpsilonRule::kInverseSqrtRate;
      break;
    case ExperimentKind::kProjective:
      p.kappa = 0.5;
      p.a = 40.0;
      p.c0 = 30.0;
      plan.h_list = {1.0 / 224, 1.0 / 256, 1.0 / 288};
      plan.schedule = TimeSchedule::kSqrtLog;
      plan.epsilon_rule = EpsilonRule::kPiOverRate;
      break;
  }

  p.h = cfg.get_double("problem.h", p.h);
  p.k = cfg.get_int("problem.k", p.k);
  p.kappa = cfg.get_double("problem.kappa", p.kappa);
  p.a = cfg.get_double("problem.a", p.a);
  p.c0 = cfg.get_double("problem.c0", p.c0);

  plan.plane.extent_rho = cfg.get_double("plane.extent_rho", plan.plane.extent_rho);
  plan.plane.extent_sigma = cfg.get_double("plane.extent_sigma", plan.plane.extent_sigma);
  plan.plane.n_rho = cfg.get_int("plane.n_rho", plan.plane.n_rho);
  plan.plane.n_sigma = cfg.get_int("plane.n_sigma", plan.plane.n_sigma);

  plan.ground.tol = cfg.get_double("ground_state.tol", plan.ground.tol);
  plan.ground.tau = cfg.get_double("ground_state.tau", plan.ground.tau);
  plan.ground.max_iters = cfg.get_int("ground_state.max_iters", plan.ground.max_iters);
  plan.a_kappa_sq_list = cfg.get_list("ground_state.a_kappa_sq_list", plan.a_kappa_sq_list);

  plan.cascade.tol = cfg.get_double("cascade.tol", plan.cascade.tol);
  plan.cascade.max_iters = cfg.get_int("cascade.max_iters", plan.cascade.max_iters);
  plan.cascade.gap_delta = cfg.get_double("cascade.gap_delta", plan.cascade.gap_delta);
  plan.cascade.eig_tol = cfg.get_double("cascade.eig_tol", plan.cascade.eig_tol);

  plan.n_r = cfg.get_int("cylinder.n_r", plan.n_r);

  plan.dt_over_h = cfg.get_double("evolve.dt_over_h", plan.dt_over_h);
  plan.samples = cfg.get_int("evolve.samples", plan.samples);
  plan.checkpoint_every = cfg.get_int("evolve.checkpoint_every", plan.checkpoint_every);

  if (cfg.has("experiment.h_list") || swept(kind))
    plan.h_list = cfg.get_list("experiment.h_list", plan.h_list);
  const std::string sched = cfg.get_string("experiment.schedule", schedule_name(plan.schedule));
  if (sched == "fixed") {
    plan.schedule = TimeSchedule::kFixed;
    plan.schedule_param = cfg.get_double("experiment.t", plan.schedule_param);
  } else if (sched == "alpha_log") {
    plan.schedule = TimeSchedule::kAlphaLog;
    plan.schedule_param = cfg.get_double("experiment.alpha", 0.5);
  } else if (sched == "beta_loglog") {
    plan.schedule = TimeSchedule::kBetaLogLog;
    plan.schedule_param = cfg.get_double("experiment.beta", 1.0);
  } else if (sched == "sqrt_log") {
    plan.schedule = TimeSchedule::kSqrtLog;
  } else {
    fail(ErrorCode::kInvalidArgument, "experiment.schedule: unknown schedule '" + sched + "'");
  }
  const std::string rule =
      cfg.get_string("experiment.epsilon_rule", epsilon_rule_name(plan.epsilon_rule));
  if (rule == "sqrt_h") {
    plan.epsilon_rule = EpsilonRule::kSqrtH;
  } else if (rule == "inverse_sqrt_rate") {
    plan.epsilon_rule = EpsilonRule::kInverseSqrtRate;
  } else if (rule == "pi_over_rate") {
    plan.epsilon_rule = EpsilonRule::kPiOverRate;
  } else {
    fail(ErrorCode::kInvalidArgument, "experiment.epsilon_rule: unknown rule '" + rule + "'");
  }
  plan.epsilon_scale = cfg.get_double("experiment.epsilon_scale", plan.epsilon_scale);
  plan.window_lo = cfg.get_double("experiment.window_lo", plan.window_lo);
  plan.window_hi = cfg.get_double("experiment.window_hi", plan.window_hi);

  cfg.reject_unused();
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------- report

Verdict ExperimentReport::verdict() const {
  bool open = false;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::kFail) return Verdict::kFail;
    if (c.verdict == Verdict::kInconclusive) open = true;
  }
  return open ? Verdict::kInconclusive : Verdict::kPass;
}

json ExperimentReport::to_json() const {
  json j;
  j["command"] = kind_name(plan.kind);
  j["verdict"] = verdict_name(verdict());
  j["plan"] = plan.to_json();
  j["per_h"] = json::array();
  for (const auto& r : per_h) j["per_h"].push_back(record_json(r));
  j["fitted_rate"] = fitted_rate;
  j["summary"] = summary;
  j["checks"] = json::array();
  for (const auto& c : checks) j["checks"].push_back(check_json(c));
  return j;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  ensure_directory(dir);
  const std::filesystem::path root(dir);
  write_text((root / "report.json").string(), report.to_json().dump(2) + "\n");
  for (const auto& t : report.tables)
    write_csv((root / t.file).string(), t.header, t.columns);
  for (const auto& a : report.artifacts) {
    const std::filesystem::path path = root / a.file;
    ensure_directory(path.parent_path().string());
    write_bytes(path.string(), a.bytes);
  }
}

// ---------------------------------------------------------------- runs

double fitted_e0_slope(double a_kappa_sq, const ExperimentPlan& plan) {
  std::vector<double> xs;
  if (std::abs(a_kappa_sq) < 1e-12) {
    xs = {-0.025, -0.0125, 0.0125, 0.025};
  } else {
    for (double f : {0.9, 0.95, 1.0, 1.05, 1.1}) xs.push_back(f * a_kappa_sq);
  }
  const OscillatorBasis basis(plan.plane);
  std::vector<double> ys(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    ProblemParams p;
    p.kappa = 1.0;
    p.a = xs[i];
    p.c0 = std::max(1.0, 2.0 * std::abs(xs[i]));
    ys[i] = solve_ground_state(p, basis, plan.ground).E0;
  });
  return fit_line(xs, ys).slope;
}

ExperimentReport run_ground_state(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const OscillatorBasis basis(plan.plane);
  const GroundState gs = solve_ground_state(plan.problem, basis, plan.ground);

  json side = {{"E0", gs.E0},
               {"j_value", gs.j_value},
               {"residual", gs.residual},
               {"iterations", gs.iterations},
               {"params", params_json(plan.problem)}};
  rep.artifacts.push_back({"v0.qmlf", encode_field(gs.v0)});
  rep.artifacts.push_back({"v0.json", text_bytes(side.dump(2) + "\n")});
  std::vector<double> iter(gs.energy_history.size());
  for (std::size_t i = 0; i < iter.size(); ++i) iter[i] = static_cast<double>(i);
  rep.tables.push_back({"energy_history.csv", {"iteration", "j_value"},
                        {iter, gs.energy_history}});
  rep.summary["ground_state"] = side;
  rep.checks.push_back(verdict_check("Euler-Lagrange residual", gs.residual <= plan.ground.tol,
                                     strf("%.3e (tol %.1e)", gs.residual, plan.ground.tol)));

  const auto& bs = plan.a_kappa_sq_list;
  if (bs.empty()) return rep;
  std::vector<double> xs{0.0};
  xs.insert(xs.end(), bs.begin(), bs.end());
  std::vector<GroundState> sols(xs.size());
  parallel_for(static_cast<int>(xs.size()), [&](int i) {
    ProblemParams p;
    p.kappa = 1.0;
    p.a = xs[i];
    p.c0 = plan.problem.c0;
    sols[i] = solve_ground_state(p, basis, plan.ground);
  });

  const double e00 = sols[0].E0;
  const double lin_dist = norm_l2(sols[0].v0 - harmonic_ground_state(plan.plane));
  rep.checks.push_back(verdict_check("linear ground-state energy", std::abs(e00 - 3.0) <= 1e-8,
                                     strf("E0(0) - 3 = %.3e", e00 - 3.0)));
  rep.checks.push_back(verdict_check("linear ground-state profile", lin_dist <= 1e-7,
                                     strf("|v0 - u0| = %.3e", lin_dist)));

  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    num += xs[i] * (sols[i].E0 - e00);
    den += xs[i] * xs[i];
  }
  require(den > 0.0, "ground_state.a_kappa_sq_list needs a nonzero entry");
  const double slope = num / den;
  const double expected = std::numbers::sqrt2 / (2.0 * kPi);
  rep.fitted_rate = slope;
  rep.checks.push_back(verdict_check(
      "energy slope at zero coupling", std::abs(slope / expected - 1.0) <= 0.02,
      strf("slope %.6f, expected %.6f (%.2f%%)", slope, expected,
           100.0 * (slope / expected - 1.0))));

  std::vector<double> e0s, tangent, dev;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    e0s.push_back(sols[i].E0);
    tangent.push_back(e00 + slope * xs[i]);
    dev.push_back(sols[i].E0 - tangent.back());
  }
  rep.tables.push_back({"curve.csv", {"a_kappa_sq", "E0", "tangent", "deviation"},
                        {xs, e0s, tangent, dev}});

  // Relative deviation from the tangent must shrink toward zero coupling.
  bool shrinking = true;
  for (int sign : {-1, 1}) {
    std::vector<std::pair<double, double>> side_pts;
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (xs[i] * sign > 0) side_pts.push_back({std::abs(xs[i]), std::abs(dev[i] / xs[i])});
    std::sort(side_pts.begin(), side_pts.end());
    for (std::size_t i = 1; i < side_pts.size(); ++i)
      if (side_pts[i].second < side_pts[i - 1].second) shrinking = false;
  }
  rep.checks.push_back(verdict_check("tangent deviation is o(a kappa^2)", shrinking,
                                     "|deviation| / |a kappa^2| ordered by |a kappa^2|"));
  rep.summary["curve"] = {{"a_kappa_sq", xs}, {"E0", e0s}, {"slope", slope},
                          {"expected_slope", expected}};
  return rep;
}

ExperimentReport run_cascade(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const CascadeSolution c =
      solve_cascade(plan.problem, plan.plane, plan.cascade, plan.ground);
  const double b = plan.problem.a_kappa_sq();
  json side = {{"E0", c.ground.E0},
               {"E1", c.E1},
               {"E2", c.E2},
               {"k", c.k},
               {"residuals", {c.linear_residuals[0], c.linear_residuals[1]}},
               {"iterations", {c.iterations[0], c.iterations[1]}},
               {"mu0", c.gap.mu0},
               {"mu1", c.gap.mu1},
               {"gap_ok", c.gap.gap_ok},
               {"params", params_json(plan.problem)}};
  rep.summary["cascade"] = side;
  rep.artifacts.push_back({"v0.qmlf", encode_field(c.ground.v0)});
  rep.artifacts.push_back({"v1.qmlf", encode_field(c.v1)});
  rep.artifacts.push_back({"v2.qmlf", encode_field(c.v2)});
  rep.artifacts.push_back({"cascade.json", text_bytes(side.dump(2) + "\n")});

  const double odd = parity_defect(c.v1, true);
  const double even = parity_defect(c.v2, false);
  const double res = std::max(c.linear_residuals[0], c.linear_residuals[1]);
  rep.checks.push_back(
      verdict_check("first correction energy vanishes", std::abs(c.E1) <= 1e-8,
                    strf("E1 = %.3e", c.E1)));
  rep.checks.push_back(verdict_check("v1 odd in rho", odd <= 1e-7, strf("%.3e", odd)));
  rep.checks.push_back(verdict_check("v2 even in rho", even <= 1e-7, strf("%.3e", even)));
  rep.checks.push_back(verdict_check("level residuals", res <= plan.cascade.tol,
                                     strf("%.3e (tol %.1e)", res, plan.cascade.tol)));
  if (std::abs(b) <= 0.05) {
    rep.checks.push_back(verdict_check("second eigenvalue above the gap",
                                       c.gap.mu1 + c.ground.E0 >= 4.0,
                                       strf("mu1 + E0 = %.6f", c.gap.mu1 + c.ground.E0)));
    if (b != 0.0) {
      const double lin = std::numbers::sqrt2 / kPi * b;
      rep.checks.push_back(verdict_check(
          "lowest eigenvalue follows the coupling", std::abs(c.gap.mu0 / lin - 1.0) <= 0.15,
          strf("mu0 = %.6e, linear prediction %.6e", c.gap.mu0, lin)));
    }
  }
  return rep;
}

ExperimentReport run_quasimode(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const ProblemParams& p = plan.problem;
  const CascadeSolution c = solve_cascade(p, plan.plane, plan.cascade, plan.ground);
  const Quasimode q = build_quasimode(c, p, default_cyl_grid(p, plan.plane, plan.n_r));
  const CylField r = compute_residual(q);
  const double norm = cyl_norm(q.profile) / std::sqrt(2.0 * kPi * p.k);
  const double wres = cyl_weighted_norm(r);
  const double lres = cyl_norm(cylinder_laplacian(r, p.h));
  json side = {{"lambda", q.lambda},
               {"angular_number", q.angular_number},
               {"E0", c.ground.E0},
               {"E1", c.E1},
               {"E2", c.E2},
               {"normalized_norm", norm},
               {"weighted_residual", wres},
               {"laplacian_residual", lres},
               {"grid",
                {{"r_min", q.profile.grid.r_min},
                 {"r_max", q.profile.grid.r_max},
                 {"n_r", q.profile.grid.n_r},
                 {"y_half", q.profile.grid.y_half},
                 {"n_y", q.profile.grid.n_y}}},
               {"params", params_json(p)}};
  rep.summary["quasimode"] = side;
  rep.artifacts.push_back({"profile.qmlf", encode_field(q.profile)});
  rep.artifacts.push_back({"residual.qmlf", encode_field(r)});
  rep.artifacts.push_back({"quasimode.json", text_bytes(side.dump(2) + "\n")});
  const bool finite = q.profile.values.allFinite() && r.values.allFinite() &&
                      std::isfinite(wres) && std::isfinite(lres);
  rep.checks.push_back(verdict_check("profile and residual finite", finite, ""));
  const double edge = max_abs_edge(q.profile.values) / q.profile.values.cwiseAbs().maxCoeff();
  rep.checks.push_back(verdict_check("profile vanishes at the radial edges", edge <= 1e-10,
                                     strf("relative edge value %.3e", edge)));
  return rep;
}

ExperimentReport run_residual_scaling(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const ResidualReport r =
      residual_scaling_study(plan.problem, plan.h_list, plan.plane, plan.n_r);
  rep.tables.push_back({"residual.csv", {"h", "weighted_norm", "laplacian_norm"},
                        {r.h_values, r.weighted_norms, r.laplacian_norms}});
  for (std::size_t i = 0; i < r.h_values.size(); ++i) {
    HRecord rec;
    rec.h = r.h_values[i];
    rep.per_h.push_back(rec);
  }
  rep.summary["weighted_norms"] = r.weighted_norms;
  rep.summary["laplacian_norms"] = r.laplacian_norms;
  rep.summary["tail_norms"] = r.tail_norms;
  rep.summary["profile_norms"] = r.profile_norms;
  rep.summary["weighted_slope"] = r.fitted_slopes[0];
  rep.summary["laplacian_slope"] = r.fitted_slopes[1];
  rep.summary["weighted_r2"] = r.weighted_fit.r2;
  rep.summary["laplacian_r2"] = r.laplacian_fit.r2;
  rep.fitted_rate = r.fitted_slopes[0];
  const double s0 = r.fitted_slopes[0], s1 = r.fitted_slopes[1];
  rep.checks.push_back(verdict_check("weighted residual slope", s0 >= 2.3 && s0 <= 2.7,
                                     strf("%.4f, window [2.3, 2.7]", s0)));
  rep.checks.push_back(verdict_check("Laplacian residual slope", s1 >= 0.3 && s1 <= 0.7,
                                     strf("%.4f, window [0.3, 0.7]", s1)));
  return rep;
}

ExperimentReport run_evolve(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const CascadeSolution c = cascade_at(plan, plan.problem.kappa, plan.problem.k);
  const int n = static_cast<int>(plan.h_list.size());
  std::vector<DeviationDiagnostics> diag(n);
  std::vector<std::vector<Artifact>> dumps(n);
  parallel_for(n, [&](int i) {
    const double h = plan.h_list[i];
    const ProblemParams p = at_h(plan, h);
    const Quasimode q = build_quasimode(c, p, evolution_grid(p));
    diag[i] = evolve_and_compare(q, plan.t_horizon(h), evolve_options(plan, h),
                                 [&](int s, double, const CylField& f) {
                                   if (plan.checkpoint_every > 0 &&
                                       s % plan.checkpoint_every == 0)
                                     dumps[i].push_back(
                                         {strf("checkpoints/%s_s%03d.qmlf",
                                               h_tag(h).c_str(), s),
                                          encode_field(f)});
                                 });
  });

  std::vector<double> hs, errs;
  double worst_rate = 0.0;
  json runs = json::array();
  for (int i = 0; i < n; ++i) {
    const auto& d = diag[i];
    const double h = plan.h_list[i];
    HRecord rec;
    rec.h = h;
    rec.t_h = plan.t_horizon(h);
    rec.err_final = d.err_l2.back();
    rec.mass_drift_rate = 0.0;
    for (std::size_t s = 1; s < d.times.size(); ++s)
      rec.mass_drift_rate = std::max(rec.mass_drift_rate, d.mass_drift[s] / d.times[s]);
    worst_rate = std::max(worst_rate, rec.mass_drift_rate);
    rep.per_h.push_back(rec);
    hs.push_back(h);
    errs.push_back(rec.err_final);
    rep.tables.push_back({"timeseries_" + h_tag(h) + ".csv",
                          {"t", "err_l2", "energy", "mass_drift", "cross_term"},
                          {d.times, d.err_l2, d.energy, d.mass_drift,
                           std::vector<double>(d.times.size(), 0.0)}});
    runs.push_back({{"h", h}, {"dt", d.dt}, {"steps", d.steps}, {"max_edge", d.max_edge}});
    for (auto& a : dumps[i]) rep.artifacts.push_back(std::move(a));
  }
  rep.summary["runs"] = runs;
  rep.checks.push_back(verdict_check("mass drift per unit time", worst_rate <= 1e-8,
                                     strf("worst %.3e", worst_rate)));
  if (n < 3) {
    rep.checks.push_back(inconclusive("deviation envelope slope", "need at least three h values"));
    return rep;
  }
  const LineFit f = fit_loglog(hs, errs);
  rep.fitted_rate = f.slope;
  rep.summary["envelope_fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
  rep.checks.push_back(verdict_check("deviation envelope slope", f.slope >= 1.2 && f.slope <= 1.8,
                                     strf("%.4f, window [1.2, 1.8]", f.slope)));
  return rep;
}

ExperimentReport run_geometric_rate(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const ProblemParams& p = plan.problem;
  const double c0_rate = plan.epsilon_rule == EpsilonRule::kSqrtH ? 0.0 : rate_constant(plan);
  const CascadeSolution base = cascade_at(plan, p.kappa, p.k);
  const int n = static_cast<int>(plan.h_list.size());
  std::vector<PairRun> runs(n);
  std::vector<double> eps(n);
  parallel_for(n, [&](int i) {
    const double h = plan.h_list[i];
    eps[i] = epsilon_for(plan, h, c0_rate);
    const CascadeSolution shifted = cascade_at(plan, p.kappa + eps[i], p.k);
    runs[i] = run_pair(plan, base, shifted, h, eps[i], plan.t_horizon(h));
  });

  const double unit = std::sqrt(2.0 * kPi * p.k);
  const double ak = std::abs(p.a) * p.kappa;
  std::vector<double> scaled_sep, slopes;
  for (int i = 0; i < n; ++i) {
    const double h = plan.h_list[i];
    const PairRun& run = runs[i];
    const double s0 = run.separation.front();
    std::vector<double> x, ratio, oracle, wx, wy, wo;
    for (std::size_t s = 0; s < run.times.size(); ++s) {
      x.push_back(ak * run.times[s]);
      ratio.push_back(run.separation[s] / s0);
      oracle.push_back(run.oracle[s] / run.oracle.front());
      if (x.back() >= plan.window_lo && x.back() <= plan.window_hi) {
        wx.push_back(x.back());
        wy.push_back(ratio.back());
        wo.push_back(oracle.back());
      }
    }
    HRecord rec;
    rec.h = h;
    rec.t_h = plan.t_horizon(h);
    rec.epsilon = eps[i];
    rec.initial_separation = s0 / unit;
    rec.peak_separation = *std::max_element(run.separation.begin(), run.separation.end()) / unit;
    rec.ratio = ratio.back();
    rec.d_pr_initial = run.d_pr.front();
    rec.d_pr_peak = *std::max_element(run.d_pr.begin(), run.d_pr.end());
    scaled_sep.push_back(rec.initial_separation / (p.kappa * std::sqrt(h)));
    rep.tables.push_back({"rate_" + h_tag(h) + ".csv",
                          {"t", "a_kappa_t", "ratio", "oracle_ratio", "separation", "d_pr"},
                          {run.times, x, ratio, oracle, run.separation, run.d_pr}});
    const std::string tag = "h = 1/" + std::to_string(std::lround(1.0 / h));
    if (wx.size() < 5) {
      rep.checks.push_back(inconclusive("linear growth, " + tag,
                                        strf("%zu samples in the fit window", wx.size())));
      rep.per_h.push_back(rec);
      continue;
    }
    const LineFit f = fit_line(wx, wy);
    const LineFit fo = fit_line(wx, wo);
    rec.fitted_slope = f.slope;
    rec.fit_r2 = f.r2;
    slopes.push_back(f.slope);
    rep.per_h.push_back(rec);
    rep.checks.push_back(verdict_check("linear growth, " + tag, f.r2 >= 0.95 && f.slope > 0.0,
                                       strf("slope %.4f, R^2 %.4f", f.slope, f.r2)));
    rep.checks.push_back(verdict_check("slope inside [0.15, 0.35], " + tag,
                                       f.slope >= 0.15 && f.slope <= 0.35,
                                       strf("%.4f", f.slope)));
    rep.checks.push_back(verdict_check(
        "slope against the two-phase model, " + tag,
        std::abs(f.slope / fo.slope - 1.0) <= 0.25,
        strf("observed %.4f, model %.4f", f.slope, fo.slope)));
  }
  if (!slopes.empty()) {
    double m = 0.0;
    for (double s : slopes) m += s;
    rep.fitted_rate = m / static_cast<double>(slopes.size());
  }
  const auto [lo, hi] = std::minmax_element(scaled_sep.begin(), scaled_sep.end());
  rep.summary["initial_separation_over_kappa_sqrt_h"] = scaled_sep;
  rep.checks.push_back(verdict_check("initial separation of order kappa sqrt(h)",
                                     *hi <= 2.0 * *lo,
                                     "ratios " + list_string(scaled_sep)));
  sanity_check(rep);
  return rep;
}

ExperimentReport run_geometric_blowup(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const ProblemParams& p = plan.problem;
  const double c0_rate = rate_constant(plan);
  rep.fitted_rate = c0_rate;
  rep.summary["rate_constant"] = c0_rate;
  const CascadeSolution base = cascade_at(plan, p.kappa, p.k);
  const int n = static_cast<int>(plan.h_list.size());
  std::vector<PairRun> runs(n);
  std::vector<double> eps(n);
  parallel_for(n, [&](int i) {
    const double h = plan.h_list[i];
    eps[i] = epsilon_for(plan, h, c0_rate);
    const CascadeSolution shifted = cascade_at(plan, p.kappa + eps[i], p.k);
    runs[i] = run_pair(plan, base, shifted, h, eps[i], plan.t_horizon(h));
  });

  const double unit = std::sqrt(2.0 * kPi * p.k);
  json linear_times = json::array();
  for (int i = 0; i < n; ++i) {
    const double h = plan.h_list[i];
    const PairRun& run = runs[i];
    HRecord rec;
    rec.h = h;
    rec.t_h = plan.t_horizon(h);
    rec.epsilon = eps[i];
    const auto peak = std::max_element(run.separation.begin(), run.separation.end());
    rec.initial_separation = run.separation.front() / unit;
    rec.peak_separation = *peak / unit;
    rec.peak_time = run.times[peak - run.separation.begin()];
    rec.predicted_peak_time = kPi / std::abs(run.delta_lambda);
    rec.ratio = *peak / run.separation.front();
    rec.d_pr_initial = run.d_pr.front();
    rec.d_pr_peak = *std::max_element(run.d_pr.begin(), run.d_pr.end());
    linear_times.push_back(kPi / (c0_rate * std::abs(p.a) * p.kappa * eps[i]));
    rep.per_h.push_back(rec);
    std::vector<double> sep(run.separation), oracle(run.oracle);
    for (auto& v : sep) v /= unit;
    for (auto& v : oracle) v /= unit;
    rep.tables.push_back({"blowup_" + h_tag(h) + ".csv",
                          {"t", "separation", "oracle_separation", "d_pr"},
                          {run.times, sep, oracle, run.d_pr}});
  }
  rep.summary["linearized_peak_times"] = linear_times;

  const auto order = by_decreasing_h(plan.h_list);
  std::vector<double> initial;
  for (int i : order) initial.push_back(rep.per_h[i].initial_separation);
  rep.checks.push_back(verdict_check("initial separation strictly decreasing",
                                     n >= 2 && strictly_decreasing(initial),
                                     "by decreasing h: " + list_string(initial)));
  if (n < 2) {
    rep.checks.push_back(inconclusive("peak separation", "need at least two h values"));
  } else {
    std::vector<double> peaks;
    bool ok = true;
    for (int j = n - 2; j < n; ++j) {
      const double v = rep.per_h[order[j]].peak_separation;
      peaks.push_back(v);
      ok = ok && v >= 0.5 * p.kappa;
    }
    rep.checks.push_back(verdict_check("peak separation at the two smallest h", ok,
                                       strf("%s vs 0.5 kappa = %.4g",
                                            list_string(peaks).c_str(), 0.5 * p.kappa)));
  }
  int compared = 0;
  bool timing_ok = true;
  std::string detail;
  for (const auto& rec : rep.per_h) {
    if (rec.predicted_peak_time > rec.t_h) continue;
    ++compared;
    const double rel = std::abs(rec.peak_time / rec.predicted_peak_time - 1.0);
    timing_ok = timing_ok && rel <= 0.25;
    detail += strf("%sh=1/%ld: %.4g vs %.4g", compared > 1 ? ", " : "", std::lround(1.0 / rec.h),
                   rec.peak_time, rec.predicted_peak_time);
  }
  if (compared == 0)
    rep.checks.push_back(inconclusive("peak time", "predicted peak lies beyond t_h for every h"));
  else
    rep.checks.push_back(verdict_check("peak time", timing_ok, detail));
  sanity_check(rep);
  return rep;
}

ExperimentReport run_projective(const ExperimentPlan& plan) {
  ExperimentReport rep;
  rep.plan = plan;
  const ProblemParams& p = plan.problem;
  const int k1 = p.k, k2 = 2 * p.k;
  const double c0_rate = rate_constant(plan);
  rep.fitted_rate = c0_rate;
  rep.summary["rate_constant"] = c0_rate;
  const CascadeSolution base1 = cascade_at(plan, p.kappa, k1);
  const CascadeSolution base2 = cascade_at(plan, p.kappa, k2);
  const int n = static_cast<int>(plan.h_list.size());

  struct Run {
    std::vector<double> times, d_pr, cross;
    double overlap_formula_err = 0.0;
    double eps = 0.0;
  };
  std::vector<Run> runs(n);
  parallel_for(n, [&](int i) {
    Run& run = runs[i];
    const double h = plan.h_list[i];
    const double t_h = plan.t_horizon(h);
    run.eps = epsilon_for(plan, h, c0_rate);
    const CascadeSolution shifted = cascade_at(plan, p.kappa + run.eps, k1);

    ProblemParams p1 = at_h(plan, h), p1s = p1, p2 = p1;
    p1s.kappa = p.kappa + run.eps;
    p2.k = k2;
    p1s.validate();
    CylGrid g1 = evolution_grid(p1, {k1, k2});
    CylGrid g2 = g1;
    g2.k = k2;
    const Quasimode q1 = build_quasimode(base1, p1, g1);
    const Quasimode q1s = build_quasimode(shifted, p1s, g1);
    const Quasimode q2 = build_quasimode(base2, p2, g2);

    // Overlap at t = 0: angular orthogonality against direct theta quadrature.
    const Complex formula = cyl_inner(q1.profile, q1s.profile) + cyl_inner(q2.profile, q2.profile);
    const long m1 = q1.angular_number, m2 = q2.angular_number;
    const long m = m2 - m1 + 1;
    Complex direct = 0.0;
    for (long j = 0; j < m; ++j) {
      const Complex e1 = std::polar(1.0, 2.0 * kPi * static_cast<double>((m1 * j) % m) / m);
      const Complex e2 = std::polar(1.0, 2.0 * kPi * static_cast<double>((m2 * j) % m) / m);
      const ComplexPlane v2 = q2.profile.values * e2;
      const CylField u{g1, q1.profile.values * e1 + v2};
      const CylField us{g1, q1s.profile.values * e1 + v2};
      direct += cyl_inner(u, us);
    }
    direct /= static_cast<double>(m);
    run.overlap_formula_err = std::abs(direct - formula) / std::max(1.0, std::abs(formula));

    const EvolveOptions opts = evolve_options(plan, h);
    std::vector<ComplexPlane> f1, f2;
    evolve(q1.profile, p1, t_h, opts,
           [&](int, double, const CylField& f) { f1.push_back(f.values); });
    evolve(q2.profile, p2, t_h, opts,
           [&](int, double, const CylField& f) { f2.push_back(f.values); });
    evolve(q1s.profile, p1s, t_h, opts, [&](int s, double t, const CylField& f) {
      const CylField a{g1, f1[s]}, b{g2, f2[s]};
      const double n1 = cyl_norm(a), n1s = cyl_norm(f), n2 = cyl_norm(b);
      const Complex overlap = cyl_inner(a, f) + n2 * n2;
      run.times.push_back(t);
      run.d_pr.push_back(projective_distance(overlap, std::hypot(n1, n2), std::hypot(n1s, n2)));
      run.cross.push_back(std::max(cross_term(a, b), cross_term(f, b)));
    });
  });

  double worst_cross = 0.0, worst_overlap = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = plan.h_list[i];
    const Run& run = runs[i];
    HRecord rec;
    rec.h = h;
    rec.t_h = plan.t_horizon(h);
    rec.epsilon = run.eps;
    const auto peak = std::max_element(run.d_pr.begin(), run.d_pr.end());
    rec.d_pr_initial = run.d_pr.front();
    rec.d_pr_peak = *peak;
    rec.peak_time = run.times[peak - run.d_pr.begin()];
    rec.cross_term_max = *std::max_element(run.cross.begin(), run.cross.end());
    worst_cross = std::max(worst_cross, rec.cross_term_max);
    worst_overlap = std::max(worst_overlap, run.overlap_formula_err);
    rep.per_h.push_back(rec);
    rep.tables.push_back({"projective_" + h_tag(h) + ".csv", {"t", "d_pr", "cross_term"},
                          {run.times, run.d_pr, run.cross}});
  }

  const auto order = by_decreasing_h(plan.h_list);
  std::vector<double> d0, d0_over_eps;
  for (int i : order) {
    d0.push_back(rep.per_h[i].d_pr_initial);
    d0_over_eps.push_back(rep.per_h[i].d_pr_initial / rep.per_h[i].epsilon);
  }
  rep.summary["d_pr_initial_over_epsilon"] = d0_over_eps;
  rep.checks.push_back(verdict_check("initial projective distance decreasing",
                                     n >= 2 && strictly_decreasing(d0),
                                     "by decreasing h: " + list_string(d0)));
  if (n < 2) {
    rep.checks.push_back(inconclusive("projective distance reaches pi/4",
                                      "need at least two h values"));
  } else {
    std::vector<double> peaks;
    bool ok = true;
    for (int j = n - 2; j < n; ++j) {
      peaks.push_back(rep.per_h[order[j]].d_pr_peak);
      ok = ok && peaks.back() >= kPi / 4;
    }
    rep.checks.push_back(verdict_check("projective distance reaches pi/4", ok,
                                       list_string(peaks) + strf(" vs %.6f", kPi / 4)));
  }
  rep.checks.push_back(verdict_check("mode cross term", worst_cross <= 1e-20,
                                     strf("max %.3e", worst_cross)));
  rep.checks.push_back(verdict_check("overlap formula at t = 0", worst_overlap <= 1e-8,
                                     strf("max relative difference %.3e", worst_overlap)));
  sanity_check(rep);
  return rep;
}

ExperimentReport run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  switch (plan.kind) {
    case ExperimentKind::kGroundState: return run_ground_state(plan);
    case ExperimentKind::kCascade: return run_cascade(plan);
    case ExperimentKind::kQuasimode: return run_quasimode(plan);
    case ExperimentKind::kResidualScaling: return run_residual_scaling(plan);
    case ExperimentKind::kEvolve: return run_evolve(plan);
    case ExperimentKind::kGeometricRate: return run_geometric_rate(plan);
    case ExperimentKind::kGeometricBlowup: return run_geometric_blowup(plan);
    case ExperimentKind::kProjective: return run_projective(plan);
  }
  fail(ErrorCode::kInternal, "unhandled experiment kind");
}

}  // namespace qmlab
