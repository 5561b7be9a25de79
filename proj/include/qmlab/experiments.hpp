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

#ifndef QMLAB_EXPERIMENTS_HPP
#define QMLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmlab/config.hpp"
#include "qmlab/evolver.hpp"

namespace qmlab {

/// Numeric values match the CLI exit codes.
enum class Verdict : int { kPass = 0, kFail = 1, kInconclusive = 2 };

enum class ExperimentKind {
  kGroundState,
  kCascade,
  kQuasimode,
  kResidualScaling,
  kEvolve,
  kGeometricRate,
  kGeometricBlowup,
  kProjective,
};

/// t_h as a function of h: fixed t, alpha log(1/h), beta log log(1/h) or
/// sqrt(log(1/h)).
enum class TimeSchedule { kFixed, kAlphaLog, kBetaLogLog, kSqrtLog };

/// Amplitude offset: scale sqrt(h), scale (C0 kappa |a| t_h)^{-1/2} or
/// scale pi / (C0 |a| kappa t_h), where C0 is twice the fitted E0 slope.
enum class EpsilonRule { kSqrtH, kInverseSqrtRate, kPiOverRate };

const char* verdict_name(Verdict v);
/// "ground-state", "geometric-rate", ...
const char* kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);
const char* schedule_name(TimeSchedule s);
const char* epsilon_rule_name(EpsilonRule r);

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::kGroundState;
  /// h, k, kappa, a, c0. h is used by single-h commands only.
  ProblemParams problem;
  PlaneGrid plane;
  GroundStateOptions ground;
  CascadeOptions cascade;
  /// Radial points of the quasimode window (quasimode, residual-scaling).
  int n_r = 512;
  std::vector<double> h_list;
  TimeSchedule schedule = TimeSchedule::kFixed;
  /// t for kFixed, alpha for kAlphaLog, beta for kBetaLogLog.
  double schedule_param = 1.0;
  EpsilonRule epsilon_rule = EpsilonRule::kSqrtH;
  double epsilon_scale = 1.0;
  /// Coupling values of the ground-state curve.
  std::vector<double> a_kappa_sq_list;
  /// dt = dt_over_h * h.
  double dt_over_h = 1.0 / 20.0;
  int samples = 50;
  /// Dump the evolved profile every this many samples (0: never).
  int checkpoint_every = 0;
  /// Fit window in |a| kappa t.
  double window_lo = 5.0;
  double window_hi = 20.0;

  double t_horizon(double h) const;
  /// Rejects non-integer 1/h, |a| kappa^2 > c0 and t_h >= log(1/h).
  void validate() const;
  nlohmann::json to_json() const;
};

/// Defaults for `kind`, overridden by the config. Unknown keys are errors.
ExperimentPlan plan_from_config(ExperimentKind kind, const Config& config);

struct Check {
  std::string name;
  Verdict verdict = Verdict::kInconclusive;
  std::string detail;
};

struct HRecord {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  double h = kUnset;
  double t_h = kUnset;
  double epsilon = kUnset;
  double initial_separation = kUnset;
  double peak_separation = kUnset;
  double peak_time = kUnset;
  double predicted_peak_time = kUnset;
  double ratio = kUnset;  ///< final separation / initial separation
  double fitted_slope = kUnset;
  double fit_r2 = kUnset;
  double d_pr_initial = kUnset;
  double d_pr_peak = kUnset;
  double cross_term_max = kUnset;
  double err_final = kUnset;
  double mass_drift_rate = kUnset;
};

/// CSV payload: one file, equal-length columns.
struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Any other output file (binary fields, JSON sidecars).
struct Artifact {
  std::string file;
  std::vector<std::uint8_t> bytes;
};

struct ExperimentReport {
  ExperimentPlan plan;
  std::vector<HRecord> per_h;
  double fitted_rate = HRecord::kUnset;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::vector<Artifact> artifacts;

  /// Fail if any check fails, else inconclusive if any is, else pass.
  Verdict verdict() const;
  nlohmann::json to_json() const;
};

/// Least-squares slope of E0 against a kappa^2 around `a_kappa_sq`
/// (+-5% and +-10%; +-0.0125 and +-0.025 at zero).
double fitted_e0_slope(double a_kappa_sq, const ExperimentPlan& plan);

ExperimentReport run_ground_state(const ExperimentPlan& plan);
ExperimentReport run_cascade(const ExperimentPlan& plan);
ExperimentReport run_quasimode(const ExperimentPlan& plan);
ExperimentReport run_residual_scaling(const ExperimentPlan& plan);
ExperimentReport run_evolve(const ExperimentPlan& plan);
ExperimentReport run_geometric_rate(const ExperimentPlan& plan);
ExperimentReport run_geometric_blowup(const ExperimentPlan& plan);
ExperimentReport run_projective(const ExperimentPlan& plan);
/// Dispatches on plan.kind.
ExperimentReport run_experiment(const ExperimentPlan& plan);

/// report.json, the tables and the artifacts under `dir`.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace qmlab

#endif  // QMLAB_EXPERIMENTS_HPP
