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
#include <numbers>
#include <random>

#include "qmlab/error.hpp"
#include "qmlab/ground_state.hpp"
#include "test_support.hpp"

using namespace qmlab;

namespace {

const PlaneGrid kDefault{};
const double kQuarticU0 = std::sqrt(2.0) / (2.0 * std::numbers::pi);

ProblemParams with_coupling(double b) {
  ProblemParams p;
  p.kappa = 1.0;
  p.a = b;
  return p;
}

PlaneField normalized(const PlaneField& f) { return f * (1.0 / norm_l2(f)); }

// u restricted to the unit sphere along a straight line.
PlaneField on_sphere(const PlaneField& u, const PlaneField& d, double eps) {
  return normalized(u + d * eps);
}

}  // namespace

TEST_CASE("evaluate_j on harmonic states") {
  const auto u0 = harmonic_ground_state(kDefault);
  CHECK(evaluate_j(u0, 0.0) == doctest::Approx(3.0).epsilon(1e-8));
  for (double b : {0.3, -0.2, 0.05}) {
    // Quartic term by direct quadrature, independent of evaluate_j.
    const double q = u0.values().cwiseAbs2().array().square().sum() *
                     kDefault.cell();
    CHECK(std::abs(q - kQuarticU0) < 1e-10);
    CHECK(std::abs(evaluate_j(u0, b) - (3.0 + b * std::sqrt(2.0) /
                                                  (4 * std::numbers::pi))) <
          1e-8);
  }
  const auto su0 =
      normalized(u0.times([](double, double s) { return s; }));
  CHECK(std::abs(evaluate_j(su0, 0.0) - 5.0) < 1e-6);
  CHECK_THROWS_AS(evaluate_j(u0 * 1.01, 0.0), Error);
}

TEST_CASE("linear ground state is the harmonic one") {
  const auto gs = solve_ground_state(with_coupling(0.0));
  CHECK(std::abs(gs.E0 - 3.0) < 1e-8);
  CHECK(norm_l2(gs.v0 - harmonic_ground_state(kDefault)) <= 1e-7);
  CHECK(gs.residual <= 1e-9);
}

TEST_CASE("nonlinear ground state invariants and energy slope") {
  OscillatorBasis basis(kDefault);
  const double slope = kQuarticU0;
  double prev_e0 = -1e300;
  for (double b : {-0.05, -0.025, 0.0, 0.025, 0.05}) {
    CAPTURE(b);
    const auto gs = solve_ground_state(with_coupling(b), basis);
    CHECK(std::abs(norm_l2(gs.v0) - 1.0) <= 1e-10);
    CHECK(gs.v0.real().minCoeff() >= -1e-10);
    CHECK(gs.v0.max_abs_imag() == 0.0);
    CHECK(gs.residual <= 1e-9);
    CHECK(std::abs(gs.E0 - (3.0 + slope * b)) <= 2e-4);
    // Focusing/defocusing ordering.
    CHECK(gs.E0 > prev_e0);
    prev_e0 = gs.E0;

    // Multiplier consistency against the complex-field operator path.
    const auto& v = gs.v0;
    const ComplexPlane cubic =
        (v.values().cwiseAbs2().array() * v.values().array()).matrix();
    const auto lhs = apply_p0(v) + PlaneField(kDefault, b * cubic);
    CHECK(std::abs(inner(lhs, v).real() - gs.E0) <= 1e-9);

    // Flow energy is non-increasing step to step.
    for (size_t i = 1; i < gs.energy_history.size(); ++i)
      CHECK(gs.energy_history[i] <= gs.energy_history[i - 1] + 1e-12);
    CHECK(gs.j_value == doctest::Approx(evaluate_j(gs.v0, b)).epsilon(1e-12));
  }
}

TEST_CASE("ground state is even from an asymmetric initial guess") {
  const double b = 0.05;
  GroundStateOptions opt;
  opt.initial_guess = PlaneField::sample(kDefault, [](double r, double s) {
    const double x = r - 0.4, y = s + 0.7;
    return Complex((1.0 + 0.3 * r) * std::exp(-(x * x + 0.4 * y * y)), 0.0);
  });
  const auto gs = solve_ground_state(with_coupling(b), kDefault, opt);
  CHECK(norm_l2(gs.v0 - gs.v0.reflect_rho()) <= 1e-8);
  CHECK(norm_l2(gs.v0 - gs.v0.reflect_sigma()) <= 1e-8);
  const auto ref = solve_ground_state(with_coupling(b));
  CHECK(norm_l2(gs.v0 - ref.v0) <= 1e-8);
  CHECK(std::abs(gs.E0 - ref.E0) <= 1e-10);
}

TEST_CASE("property: J gradient matches finite differences") {
  std::mt19937 rng(21);
  const auto g = testing::medium_grid();
  for (int trial = 0; trial < 12; ++trial) {
    const bool real_only = trial % 2 == 0;
    const double b = (trial % 3 - 1) * 0.4;
    const auto u = normalized(testing::random_smooth_field(g, rng, real_only));
    const auto d = testing::random_smooth_field(g, rng, real_only);
    const double eps = 1e-4;
    auto jd = [&](double e) { return evaluate_j(on_sphere(u, d, e), b); };
    const double fd =
        (-jd(2 * eps) + 8 * jd(eps) - 8 * jd(-eps) + jd(-2 * eps)) / (12 * eps);
    // Tangential part of the direction.
    const auto dt = d - u * Complex(inner(u, d).real(), 0.0);
    const double analytic = inner(j_gradient(u, b), dt).real();
    CAPTURE(trial);
    CHECK(std::abs(fd - analytic) <= 1e-6 * std::abs(analytic));
  }
}

TEST_CASE("decay fits") {
  const auto u0 = harmonic_ground_state(kDefault);
  const auto f0 = fit_decay(u0);
  CHECK(f0.rate >= 0.5);
  CHECK(f0.r2 >= 0.9);

  const auto gs = solve_ground_state(with_coupling(-0.05));
  CHECK(fit_decay(gs.v0).rate > 0.0);

  const auto one = PlaneField::sample(kDefault, [](double, double) {
    return Complex(1.0, 0.0);
  });
  CHECK_THROWS_AS(fit_decay(one), Error);
}

TEST_CASE("solver rejects large coupling and reports non-convergence") {
  ProblemParams p = with_coupling(0.8);
  try {
    solve_ground_state(p);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }

  GroundStateOptions opt;
  opt.max_iters = 2;
  try {
    solve_ground_state(with_coupling(0.05), kDefault, opt);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
  }
}
