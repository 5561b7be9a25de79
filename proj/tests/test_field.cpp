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
#include <limits>
#include <numbers>
#include <random>

#include "qmlab/error.hpp"
#include "qmlab/field.hpp"
#include "test_support.hpp"

using namespace qmlab;

namespace {

const PlaneGrid kDefault{};

// d^2/drho^2 + d^2/dsigma^2 of sigma*u0, worked out by hand:
// u0 = c exp(-(rho^2 + sigma^2/2)),
// d_rho^2 (sigma u0) = (4 rho^2 - 2) sigma u0,
// d_sigma^2 (sigma u0) = (sigma^2 - 3) sigma u0.
double sigma_u0_p0_exact(double r, double s) {
  const double f = s * harmonic_ground_state_value(r, s);
  const double lap = (4 * r * r - 2) * f + (s * s - 3) * f;
  return -lap + (4 * r * r + s * s) * f;
}

}  // namespace

TEST_CASE("apply_p0: harmonic ground state has eigenvalue 3") {
  const auto u0 = harmonic_ground_state(kDefault);
  const auto p = apply_p0(u0);
  const double scale = u0.values().cwiseAbs().maxCoeff();
  const double err = (p.values() - 3.0 * u0.values()).cwiseAbs().maxCoeff();
  CHECK(err / scale < 1e-8);
}

TEST_CASE("apply_p0: zero maps to zero") {
  PlaneField zero(kDefault);
  CHECK(apply_p0(zero).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply_p0: sigma*u0 is the second level with eigenvalue 5") {
  const auto f = harmonic_ground_state(kDefault).times(
      [](double, double s) { return s; });
  const auto p = apply_p0(f);
  const double scale = f.values().cwiseAbs().maxCoeff();
  CHECK((p.values() - 5.0 * f.values()).cwiseAbs().maxCoeff() / scale < 1e-8);

  // Closed-form derivative at a handful of points.
  const int idx[][2] = {{128, 150}, {120, 140}, {140, 100}, {110, 160}};
  for (const auto& ij : idx) {
    const double r = kDefault.rho(ij[0]), s = kDefault.sigma(ij[1]);
    CHECK(p.values()(ij[0], ij[1]).real() ==
          doctest::Approx(sigma_u0_p0_exact(r, s)).epsilon(1e-8));
  }
}

TEST_CASE("apply_p0: rejects non-finite input") {
  ComplexPlane v = ComplexPlane::Zero(kDefault.n_rho, kDefault.n_sigma);
  v(3, 4) = std::numeric_limits<double>::quiet_NaN();
  PlaneField f(kDefault, v);
  CHECK_THROWS_AS(apply_p0(f), Error);
}

TEST_CASE("inner and norms of the harmonic ground state") {
  const auto u0 = harmonic_ground_state(kDefault);
  CHECK(std::abs(inner(u0, u0) - 1.0) < 1e-10);
  const auto su0 = u0.times([](double, double s) { return s; });
  CHECK(std::abs(inner(u0, su0)) < 1e-12);
  const double l4 = norm_l4(u0);
  CHECK(std::abs(std::pow(l4, 4) - std::sqrt(2.0) / (2 * std::numbers::pi)) <
        1e-6);
  CHECK(norm_l2(PlaneField(kDefault)) == 0.0);
  CHECK(norm_l4(PlaneField(kDefault)) == 0.0);
}

TEST_CASE("inner: grid mismatch is rejected") {
  PlaneField a(kDefault);
  PlaneField b(testing::small_grid());
  CHECK_THROWS_AS(inner(a, b), Error);
}

TEST_CASE("norms are homogeneous and inner is positive") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(-3.0, 3.0);
  const auto g = testing::medium_grid();
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = testing::random_smooth_field(g, rng);
    const Complex c(ud(rng), ud(rng));
    CHECK(inner(f, f).real() >= 0.0);
    CHECK(std::abs(inner(f, f).imag()) < 1e-12 * inner(f, f).real());
    CHECK(norm_l2(f * c) == doctest::Approx(std::abs(c) * norm_l2(f)).epsilon(1e-13));
    CHECK(norm_l4(f * c) == doctest::Approx(std::abs(c) * norm_l4(f)).epsilon(1e-13));
  }
}

TEST_CASE("property: apply_p0 is self-adjoint and bounded below by 3") {
  std::mt19937 rng(7);
  const auto g = testing::medium_grid();
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_smooth_field(g, rng);
    const auto h = testing::random_smooth_field(g, rng);
    const Complex lhs = inner(apply_p0(f), h);
    const Complex rhs = inner(f, apply_p0(h));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * norm_l2(f) * norm_l2(h));

    const auto fr = testing::random_smooth_field(g, rng, true);
    const double q = inner(apply_p0(fr), fr).real();
    CHECK(q >= 3.0 * inner(fr, fr).real() - 1e-9);
  }
}

TEST_CASE("projective distance: examples") {
  std::mt19937 rng(3);
  const auto g = testing::medium_grid();
  const auto f = testing::random_smooth_field(g, rng);
  CHECK(projective_distance(f, f) < 1e-7);

  const auto u0 = harmonic_ground_state(g);
  const auto su0 = u0.times([](double, double s) { return s; });
  CHECK(projective_distance(u0, su0) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));

  for (double phi : {0.3, 1.7, -2.9}) {
    const Complex c = 2.5 * std::polar(1.0, phi);
    CHECK(projective_distance(f, f * c) < 1e-7);
  }
  CHECK_THROWS_AS(projective_distance(f, PlaneField(g)), Error);
}

TEST_CASE("property: projective distance is a metric on rays") {
  std::mt19937 rng(5);
  const auto g = testing::small_grid();
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_smooth_field(g, rng);
    const auto b = testing::random_smooth_field(g, rng);
    const auto c = testing::random_smooth_field(g, rng);
    const double ab = projective_distance(a, b);
    const double ba = projective_distance(b, a);
    const double bc = projective_distance(b, c);
    const double ac = projective_distance(a, c);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ab <= std::numbers::pi / 2);
    CHECK(ac <= ab + bc + 1e-10);
  }
}

TEST_CASE("quadrature is refinement consistent") {
  const PlaneGrid coarse{6.0, 8.0, 128, 128};
  const PlaneGrid fine{6.0, 8.0, 256, 256};
  CHECK(std::abs(norm_l2(harmonic_ground_state(coarse)) -
                 norm_l2(harmonic_ground_state(fine))) < 1e-10);
}

TEST_CASE("reflections and d_rho parity") {
  const auto g = testing::medium_grid();
  const auto u0 = harmonic_ground_state(g);
  CHECK(norm_l2(u0.reflect_rho() - u0) < 1e-14);
  CHECK(norm_l2(u0.reflect_sigma() - u0) < 1e-14);
  const auto d = d_rho(u0);
  const auto exact = u0.times([](double r, double) { return -2.0 * r; });
  CHECK(norm_l2(d - exact) < 1e-10);
  CHECK(norm_l2(d.reflect_rho() + d) < 1e-12);
}

TEST_CASE("oscillator basis reproduces the harmonic levels") {
  OscillatorBasis basis(testing::medium_grid());
  // H_rho = -d^2 + 4 rho^2 has levels 2(2n+1); H_sigma has 2n+1.
  CHECK(basis.rho_levels()(0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(basis.rho_levels()(1) == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(basis.sigma_levels()(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(basis.sigma_levels()(2) == doctest::Approx(5.0).epsilon(1e-10));

  std::mt19937 rng(9);
  const auto g = basis.grid();
  const auto f = testing::random_smooth_field(g, rng, true).real();
  const RealPlane direct = apply_p0(g, f);
  const RealPlane viaBasis =
      basis.apply_function(f, [](double lam) { return lam; });
  CHECK((direct - viaBasis).cwiseAbs().maxCoeff() <
        1e-9 * direct.cwiseAbs().maxCoeff());
}

TEST_CASE("trigonometric interpolation reproduces smooth periodic data") {
  const int n = 64;
  const double origin = -6.0, dx = 12.0 / n;
  Eigen::VectorXd samples(n);
  for (int i = 0; i < n; ++i) {
    const double x = origin + i * dx;
    samples(i) = std::exp(-x * x) * std::cos(x);
  }
  std::vector<double> targets{-1.234, 0.0, 0.77, 2.5, origin + 5 * dx};
  const auto m = trig_interpolation_matrix(targets, n, origin, dx);
  const Eigen::VectorXd got = m * samples;
  for (size_t t = 0; t < targets.size(); ++t) {
    const double x = targets[t];
    CHECK(got(t) == doctest::Approx(std::exp(-x * x) * std::cos(x)).epsilon(1e-12));
  }
}

TEST_CASE("problem parameters are validated") {
  ProblemParams p;
  p.h = 1.0 / 16.0;
  CHECK_NOTHROW(p.validate());
  p.h = 0.3;
  CHECK_THROWS_AS(p.validate(), Error);
  p.h = 1.0 / 8.0;
  p.a = 1.0;
  p.kappa = 1.0;
  CHECK_THROWS_AS(p.validate(), Error);  // |a| kappa^2 = 1 > c0 = 0.5
  p.c0 = 2.0;
  CHECK_NOTHROW(p.validate());
}
