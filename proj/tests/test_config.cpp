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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "qmlab/error.hpp"
#include "qmlab/experiments.hpp"

using namespace qmlab;

namespace {

ExperimentPlan plan_for(ExperimentKind kind, const std::string& text) {
  return plan_from_config(kind, Config::parse(text));
}

bool rejected(ExperimentKind kind, const std::string& text) {
  try {
    plan_for(kind, text);
  } catch (const Error& e) {
    return e.code() == ErrorCode::kInvalidArgument;
  }
  return false;
}

}  // namespace

TEST_CASE("config values, fractions and lists") {
  const Config c = Config::parse(
      "[problem]\n"
      "h = 1/64   ; trailing comment\n"
      "a = -2.5e-2\n"
      "k = 4\n"
      "# full-line comment\n"
      "[experiment]\n"
      "h_list = 1/8, 0.0625 ,1/32,\n"
      "schedule = sqrt_log\n");
  CHECK(c.get_double("problem.h", 0.0) == 1.0 / 64);
  CHECK(c.get_double("problem.a", 0.0) == -0.025);
  CHECK(c.get_int("problem.k", 0) == 4);
  CHECK(c.get_double("problem.kappa", 0.75) == 0.75);
  CHECK(c.get_list("experiment.h_list", {}) == std::vector<double>{0.125, 0.0625, 1.0 / 32});
  CHECK(c.get_string("experiment.schedule", "") == "sqrt_log");
  CHECK(c.has("problem.k"));
  CHECK_FALSE(c.has("problem.kappa"));
  CHECK(c.unused_keys().empty());
  CHECK_NOTHROW(c.reject_unused());

  CHECK(parse_real(" 3/4 ") == 0.75);
  CHECK(parse_real("1e-3") == 1e-3);
  CHECK_THROWS_AS(parse_real("1/0"), Error);
  CHECK_THROWS_AS(parse_real("abc"), Error);
  CHECK_THROWS_AS(parse_real("1.5x"), Error);
  CHECK_THROWS_AS(c.get_double("experiment.schedule", 0.0), Error);
  CHECK_THROWS_AS(c.get_int("problem.a", 0), Error);
}

TEST_CASE("unknown keys and malformed files are errors") {
  const Config c = Config::parse("[problem]\nkapa = 1\n");
  CHECK(c.unused_keys() == std::vector<std::string>{"problem.kapa"});
  CHECK_THROWS_AS(c.reject_unused(), Error);
  CHECK(rejected(ExperimentKind::kCascade, "[problem]\nkapa = 1\n"));
  CHECK(rejected(ExperimentKind::kCascade, "[problme]\na = 0.01\n"));
  CHECK_THROWS_AS(Config::parse("a = 1\n"), Error);
  CHECK_THROWS_AS(Config::parse("[problem\nh = 1\n"), Error);
  CHECK_THROWS_AS(Config::load("/nonexistent/qmlab.ini"), Error);

  Config d;
  d.set("problem.a", "0.01");
  CHECK(d.get_double("problem.a", 0.0) == 0.01);
  CHECK_THROWS_AS(d.set("nodot", "1"), Error);
}

TEST_CASE("shipped configs parse into valid plans") {
  const std::filesystem::path dir = QMLAB_CONFIG_DIR;
  const std::pair<const char*, ExperimentKind> files[] = {
      {"ground_state.ini", ExperimentKind::kGroundState},
      {"cascade.ini", ExperimentKind::kCascade},
      {"quasimode.ini", ExperimentKind::kQuasimode},
      {"residual_scaling.ini", ExperimentKind::kResidualScaling},
      {"evolve.ini", ExperimentKind::kEvolve},
      {"geometric_rate.ini", ExperimentKind::kGeometricRate},
      {"geometric_blowup.ini", ExperimentKind::kGeometricBlowup},
      {"projective.ini", ExperimentKind::kProjective},
  };
  for (const auto& [file, kind] : files) {
    CAPTURE(file);
    const ExperimentPlan from_file = plan_from_config(kind, Config::load((dir / file).string()));
    const ExperimentPlan defaults = plan_for(kind, "");
    // The files spell out the defaults.
    CHECK(from_file.to_json() == defaults.to_json());
  }
}

TEST_CASE("plan defaults") {
  const ExperimentPlan rate = plan_for(ExperimentKind::kGeometricRate, "");
  CHECK(rate.problem.kappa == 0.5);
  CHECK(rate.problem.a_kappa_sq() == 5.0);
  CHECK(rate.schedule == TimeSchedule::kFixed);
  CHECK(rate.epsilon_rule == EpsilonRule::kSqrtH);
  CHECK(rate.h_list.size() == 3);
  CHECK(rate.samples == 50);
  CHECK(rate.dt_over_h == 1.0 / 20);

  const ExperimentPlan blow = plan_for(ExperimentKind::kGeometricBlowup, "");
  CHECK(blow.schedule == TimeSchedule::kSqrtLog);
  CHECK(blow.epsilon_rule == EpsilonRule::kInverseSqrtRate);
  CHECK(blow.t_horizon(1.0 / 64) == doctest::Approx(std::sqrt(std::log(64.0))));

  const ExperimentPlan proj = plan_for(ExperimentKind::kProjective, "");
  CHECK(proj.epsilon_rule == EpsilonRule::kPiOverRate);

  const ExperimentPlan gs = plan_for(ExperimentKind::kGroundState, "");
  CHECK(gs.a_kappa_sq_list.size() == 6);
  CHECK(gs.problem.a == 0.0);
}

TEST_CASE("time schedules") {
  const double h = 1.0 / 64, l = std::log(64.0);
  auto horizon = [&](const std::string& body) {
    return plan_for(ExperimentKind::kEvolve, "[experiment]\nh_list = 1/64\n" + body).t_horizon(h);
  };
  CHECK(horizon("schedule = fixed\nt = 0.7\n") == 0.7);
  CHECK(horizon("schedule = alpha_log\nalpha = 0.25\n") == doctest::Approx(0.25 * l));
  CHECK(horizon("schedule = beta_loglog\nbeta = 0.8\n") == doctest::Approx(0.8 * std::log(l)));
  CHECK(horizon("schedule = sqrt_log\n") == doctest::Approx(std::sqrt(l)));
}

TEST_CASE("plans outside the validity regime are rejected") {
  // t_h must stay below log(1/h): log(16) = 2.77.
  CHECK(rejected(ExperimentKind::kEvolve, "[experiment]\nh_list = 1/16\nt = 2.8\n"));
  CHECK_FALSE(rejected(ExperimentKind::kEvolve, "[experiment]\nh_list = 1/16\nt = 2.7\n"));
  CHECK(rejected(ExperimentKind::kEvolve,
                 "[experiment]\nh_list = 1/16\nschedule = alpha_log\nalpha = 1.0\n"));
  // beta log log(1/h) is not positive for 1/h <= e.
  CHECK(rejected(ExperimentKind::kEvolve, "[experiment]\nh_list = 1/2\nschedule = beta_loglog\n"));
  // 1/h must be an integer.
  CHECK(rejected(ExperimentKind::kEvolve, "[experiment]\nh_list = 0.3\n"));
  CHECK(rejected(ExperimentKind::kQuasimode, "[problem]\nh = 0.07\n"));
  // |a| kappa^2 <= c0.
  CHECK(rejected(ExperimentKind::kCascade, "[problem]\na = 0.6\n"));
  CHECK(rejected(ExperimentKind::kGroundState, "[ground_state]\na_kappa_sq_list = 0.1, 0.7\n"));
  CHECK(rejected(ExperimentKind::kGeometricRate, "[problem]\nc0 = 4\n"));
  // Unknown names and bad numbers.
  CHECK(rejected(ExperimentKind::kEvolve, "[experiment]\nschedule = forever\n"));
  CHECK(rejected(ExperimentKind::kProjective, "[experiment]\nepsilon_rule = golden\n"));
  CHECK(rejected(ExperimentKind::kEvolve, "[evolve]\ndt_over_h = 0.2\n"));
  CHECK(rejected(ExperimentKind::kEvolve, "[evolve]\nsamples = 0\n"));
  CHECK(rejected(ExperimentKind::kGeometricRate, "[experiment]\nwindow_lo = 20\n"));
  CHECK(rejected(ExperimentKind::kEvolve, "[experiment]\nh_list = ,\n"));
  CHECK_THROWS_AS(parse_kind("experiment"), Error);
}

TEST_CASE("command names") {
  for (auto k : {ExperimentKind::kGroundState, ExperimentKind::kCascade,
                 ExperimentKind::kQuasimode, ExperimentKind::kResidualScaling,
                 ExperimentKind::kEvolve, ExperimentKind::kGeometricRate,
                 ExperimentKind::kGeometricBlowup, ExperimentKind::kProjective})
    CHECK(parse_kind(kind_name(k)) == k);
}

TEST_CASE("verdict aggregation") {
  ExperimentReport r;
  CHECK(r.verdict() == Verdict::kPass);
  r.checks.push_back({"a", Verdict::kPass, ""});
  CHECK(r.verdict() == Verdict::kPass);
  r.checks.push_back({"b", Verdict::kInconclusive, ""});
  CHECK(r.verdict() == Verdict::kInconclusive);
  r.checks.push_back({"c", Verdict::kFail, ""});
  CHECK(r.verdict() == Verdict::kFail);
  CHECK(static_cast<int>(Verdict::kInconclusive) == 2);

  const auto j = r.to_json();
  CHECK(j["verdict"] == "fail");
  CHECK(j["checks"].size() == 3);
  CHECK(j["checks"][1]["verdict"] == "inconclusive");
  // Unset numbers are written as null.
  CHECK(nlohmann::json::parse(j.dump())["fitted_rate"].is_null());
}
