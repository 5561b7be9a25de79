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
#include <map>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "qmlab/cascade.hpp"
#include "qmlab/error.hpp"
#include "test_support.hpp"

using namespace qmlab;

namespace {

const PlaneGrid kDefault{};

ProblemParams params_for(double b, int k = 1) {
  ProblemParams p;
  p.a = b;
  p.k = k;
  return p;
}

// Ground states are reused across cases.
const GroundState& ground(double b, const PlaneGrid& g = kDefault) {
  static std::map<std::pair<double, int>, GroundState> cache;
  const auto key = std::make_pair(b, g.n_rho);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, solve_ground_state(params_for(b), g)).first;
  return it->second;
}

PlaneField sigma_times(const PlaneField& f) {
  return f.times([](double, double s) { return s; });
}

}  // namespace

TEST_CASE("apply_linearized examples") {
  const auto& gs = ground(0.0);
  const auto u0 = harmonic_ground_state(kDefault);
  CHECK(norm_l2(apply_linearized(u0, gs, 0.0)) < 1e-8);
  const auto f = sigma_times(u0);
  CHECK(norm_l2(apply_linearized(f, gs, 0.0) - f * 2.0) < 1e-7);
  CHECK_THROWS_AS(apply_linearized(f, gs, 0.1), Error);
  CHECK_THROWS_AS(apply_linearized(PlaneField(testing::small_grid()), gs, 0.0),
                  Error);
}

TEST_CASE("property: linearized operator is self-adjoint") {
  const auto& gs = ground(0.05);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = testing::random_smooth_field(kDefault, rng);
    const auto g = testing::random_smooth_field(kDefault, rng);
    const Complex lhs = inner(apply_linearized(f, gs, 0.05), g);
    const Complex rhs = inner(f, apply_linearized(g, gs, 0.05));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * norm_l2(f) * norm_l2(g));
  }
}

TEST_CASE("spectral gap") {
  SUBCASE("linear limit") {
    const auto rep = spectral_gap(ground(0.0), 0.0);
    CHECK(std::abs(rep.mu0) < 1e-6);
    CHECK(std::abs(rep.mu1 - 2.0) < 1e-6);
    CHECK_FALSE(rep.gap_ok);
    CHECK(norm_l2(rep.w0 - ground(0.0).v0) < 1e-6);
  }
  SUBCASE("small coupling") {
    for (double b : {-0.05, -0.025, 0.025, 0.05}) {
      CAPTURE(b);
      const auto& gs = ground(b);
      const auto rep = spectral_gap(gs, b);
      CHECK(rep.mu0 < rep.mu1);
      CHECK(rep.gap_ok);
      CHECK(rep.mu1 + gs.E0 >= 4.0);
      const double predicted = std::sqrt(2.0) / std::numbers::pi * b;
      CHECK(std::abs(rep.mu0 - predicted) <= 0.15 * std::abs(predicted));
      CHECK(rep.residuals[0] <= 1e-8);
      CHECK(rep.residuals[1] <= 1e-8);
      // Eigenpair check through the public operator.
      const auto lw = apply_linearized(rep.w0, gs, b);
      CHECK(norm_l2(lw - rep.w0 * rep.mu0) <= 1e-7);
    }
  }
}

TEST_CASE("level 1: selection rule, parity and residual") {
  for (double b : {-0.05, 0.0, 0.05, 0.5}) {
    CAPTURE(b);
    const auto& gs = ground(b);
    const auto p = params_for(b);
    const auto l1 = solve_level1(gs, p);
    CHECK(std::abs(l1.E) < 1e-8);
    // Both pairings vanish by parity; direct quadrature.
    const RealPlane v0 = gs.v0.real();
    CHECK(std::abs(inner(kDefault, d_rho(kDefault, v0), v0)) < 1e-10);
    CHECK(std::abs(inner(kDefault, rho_power(kDefault, 3).cwiseProduct(v0), v0)) <
          1e-10);
    CHECK(std::abs(l1.solvability) < 1e-9);
    CHECK(l1.residual <= 1e-9);
    CHECK(l1.iterations < 500);
    CHECK(norm_l2(l1.v + l1.v.reflect_rho()) <= 1e-7);
    CHECK(norm_l2(l1.v - l1.v.reflect_sigma()) <= 1e-7);
    CHECK(norm_l2(apply_linearized(l1.v, gs, b) - l1.rhs) <= 1e-9);
    const double n1 = norm_l2(l1.v);
    CHECK(n1 > 1e-2);
    CHECK(n1 < 10.0);
    CHECK(fit_decay(l1.v).rate > 0.0);
  }
}

TEST_CASE("level 2: selection rule, parity and residual") {
  for (double b : {-0.05, 0.0, 0.05}) {
    CAPTURE(b);
    const auto& gs = ground(b);
    const auto p = params_for(b);
    const auto l1 = solve_level1(gs, p);
    const auto l2 = solve_level2(gs, l1.v, l1.E, p);
    CHECK(std::abs(inner(l2.rhs, gs.v0).real()) < 1e-9);
    CHECK(l2.residual <= 1e-9);
    CHECK(l2.iterations < 500);
    CHECK(norm_l2(l2.v - l2.v.reflect_rho()) <= 1e-7);
    CHECK(norm_l2(apply_linearized(l2.v, gs, b) - l2.rhs) <= 1e-9);
    const double n2 = norm_l2(l2.v);
    CHECK(n2 > 1e-3);
    CHECK(n2 < 10.0);
    CHECK(fit_decay(l2.v).rate > 0.0);
  }
}

TEST_CASE("linear cascade matches the dense eigen-expansion") {
  const PlaneGrid g = testing::small_grid();
  testing::DenseCascade dense(g);
  CHECK(std::abs(dense.e0() - 3.0) < 1e-9);
  for (int k : {1, 2}) {
    CAPTURE(k);
    dense.run(k);
    const auto& gs = ground(0.0, g);
    const auto p = params_for(0.0, k);
    const auto l1 = solve_level1(gs, p);
    const auto l2 = solve_level2(gs, l1.v, l1.E, p);
    CHECK(std::abs(l1.E - dense.e1) < 1e-8);
    CHECK(norm_l2(g, RealPlane(l1.v.real() - dense.v1)) <= 1e-5);
    CHECK(std::abs(l2.E - dense.e2) <= 1e-5);
    CHECK(norm_l2(g, RealPlane(l2.v.real() - dense.v2)) <= 1e-5);
  }
}

TEST_CASE("linear cascade reproduces the exact oscillator level") {
  // At a = 0 the circle mode is an exact eigenfunction with lambda h =
  // 2k^2 + 3h, so every correction to the energy vanishes.
  for (int k : {1, 2, 3}) {
    const auto c = solve_cascade(ground(0.0), params_for(0.0, k));
    CHECK(std::abs(c.E1) < 1e-10);
    CHECK(std::abs(c.E2) < 1e-8);
  }
}

TEST_CASE("k scaling and linearity") {
  const auto& gs = ground(0.05);
  const auto c1 = solve_cascade(gs, params_for(0.05, 1));
  const auto c2 = solve_cascade(gs, params_for(0.05, 2));
  CHECK(norm_l2(c1.v1 - c2.v1) > 1e-3);
  CHECK(norm_l2(c1.v2 - c2.v2) > 1e-3);
  const double f1 = norm_l2(level1_source(gs, 1));
  const double f2 = norm_l2(level1_source(gs, 2));
  CHECK(f2 == doctest::Approx(0.5 * f1).epsilon(1e-12));
  // The level-1 source scales with 1/k at a fixed operator.
  CHECK(norm_l2(c1.v1 * 0.5 - c2.v1) <= 1e-8);
}

TEST_CASE("level solves reject a closed spectral gap") {
  const auto& gs = ground(0.05);
  SpectralGapReport fake;
  fake.mu0 = 0.0;
  fake.mu1 = 1e-5;
  fake.delta = 1e-3;
  try {
    solve_level1(gs, params_for(0.05), {}, fake);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNumerical);
  }
  CHECK_THROWS_AS(solve_level1(gs, params_for(0.1)), Error);
}
