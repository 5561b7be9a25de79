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

#include "qmlab/error.hpp"
#include "qmlab/evolver.hpp"
#include "qmlab/krylov.hpp"
#include "qmlab/parallel.hpp"

using namespace qmlab;

namespace {

ProblemParams params_for(double a, int k, double h) {
  ProblemParams p;
  p.a = a;
  p.k = k;
  p.h = h;
  p.c0 = 50.0;
  return p;
}

const CascadeSolution& cascade(double b, int k) {
  static std::map<std::pair<double, int>, CascadeSolution> cache;
  auto key = std::make_pair(b, k);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, solve_cascade(params_for(b, k, 1.0 / 16))).first;
  return it->second;
}

Quasimode quasimode(double a, int k, double h) {
  const auto p = params_for(a, k, h);
  return build_quasimode(cascade(a, k), p, evolution_grid(p));
}

double plain_norm(const ComplexPlane& v) { return v.norm(); }

ComplexPlane run(Evolver& ev, ComplexPlane phi, double dt, int steps) {
  for (int n = 0; n < steps; ++n) ev.step(phi, dt);
  return phi;
}

std::vector<double> terminal_errors(double a, int k, const std::vector<double>& hs,
                                    double t_end) {
  std::vector<double> out(hs.size());
  parallel_for(static_cast<int>(hs.size()), [&](int i) {
    out[i] = evolve_and_compare(quasimode(a, k, hs[i]), t_end).err_l2.back();
  });
  return out;
}

}  // namespace

TEST_CASE("evolution window") {
  for (int k : {1, 2, 4})
    for (double h : {1.0 / 8, 1.0 / 64}) {
      CAPTURE(k);
      CAPTURE(h);
      const auto g = evolution_grid(params_for(0.0, k, h));
      CHECK(g.k == k);
      CHECK(g.r_min <= 0.5 * k);
      CHECK(g.r_max >= 1.5 * k);
      CHECK(g.r_min >= 0.05 * k);
      CHECK(g.r_max >= k + 8 * std::sqrt(h));
      CHECK(g.dr() <= 0.08 * std::sqrt(h));
      int m = g.n_r;
      CHECK(m % 2 == 0);
      for (int f : {2, 3, 5})
        while (m % f == 0) m /= f;
      CHECK(m == 1);
      CHECK(g.y_half == doctest::Approx(9 * std::sqrt(h)));
    }
  const auto both = evolution_grid(params_for(0.0, 1, 1.0 / 64), {2});
  CHECK(both.k == 1);
  CHECK(both.r_min <= 0.5);
  CHECK(both.r_max >= 3.0);
}

TEST_CASE("linear eigenmode is carried by a phase") {
  const auto p = params_for(0.0, 4, 1.0 / 16);
  const CylGrid g = evolution_grid(p);
  Evolver ev(p, g);
  const int n = g.n_r * g.n_y;
  auto as_plane = [&](const Eigen::VectorXd& v) {
    return ComplexPlane(Eigen::Map<const Eigen::MatrixXd>(v.data(), g.n_r, g.n_y)
                            .cast<Complex>());
  };
  auto as_vector = [&](const ComplexPlane& f) {
    const Eigen::MatrixXd re = f.real();
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(re.data(), n));
  };
  const LinearMap a = [&](const Eigen::VectorXd& v) {
    return as_vector(ev.apply_linear(as_plane(v)));
  };
  const LinearMap m = [&](const Eigen::VectorXd& v) {
    return as_vector(ev.kinetic_resolvent(as_plane(v), 1.0));
  };
  Eigen::MatrixXd start(n, 1);
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i) {
      const double rho = (g.r(i) - 4.0) * 4.0, sigma = g.y(j) * 4.0;
      start(i + j * g.n_r, 0) = std::exp(-rho * rho - sigma * sigma / 2);
    }
  const auto eig = lowest_eigenpairs(a, m, start, 1, 1e-10, 400);
  REQUIRE(eig.converged);
  const double omega = eig.values(0);
  // Scaled harmonic ground level, 3 + O(h).
  CHECK(omega == doctest::Approx(3.0).epsilon(0.05));
  const ComplexPlane phi0 = as_plane(eig.vectors.col(0));

  std::vector<double> errs;
  for (int refine : {1, 2}) {
    const double dt = p.h / (20.0 * refine);
    const int steps = 100 * refine;
    const ComplexPlane phi = run(ev, phi0, dt, steps);
    const double t = dt * steps;
    CHECK(std::abs(plain_norm(phi) - plain_norm(phi0)) <= 1e-10 * plain_norm(phi0));
    errs.push_back(plain_norm(phi - phi0 * std::polar(1.0, -omega * t)) / plain_norm(phi0));
  }
  CHECK(errs[0] < 1e-3);
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mass is conserved over 1000 steps") {
  const auto qm = quasimode(0.5, 1, 1.0 / 32);
  auto state = make_state(qm.profile, qm.params);
  const double dt = qm.params.h / 20;
  for (int n = 0; n < 1000; ++n) state = step(state, dt);
  const double m = cyl_norm(state.psi);
  CHECK(std::abs(m * m - state.mass0) <= 1e-8 * state.mass0);
  CHECK(state.t == doctest::Approx(1000 * dt));
}

TEST_CASE("Strang splitting is second order") {
  // Smooth data: at k = 4 the cutoff acts where the profile is negligible.
  const auto qm = quasimode(0.5, 4, 1.0 / 16);
  Evolver ev(qm.params, qm.profile.grid);
  const ComplexPlane phi0 = ev.to_phi(qm.profile.values);
  const double dt = qm.params.h / 10, t = 0.5;
  const int steps = static_cast<int>(std::lround(t / dt));
  const ComplexPlane a = run(ev, phi0, dt, steps);
  const ComplexPlane b = run(ev, phi0, dt / 2, 2 * steps);
  const ComplexPlane c = run(ev, phi0, dt / 4, 4 * steps);
  const double ratio = plain_norm(a - b) / plain_norm(b - c);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
  CHECK(plain_norm(a - c) / plain_norm(c) < 1e-3);
}

TEST_CASE("forward then backward returns the initial state") {
  const auto qm = quasimode(2.0, 1, 1.0 / 16);
  Evolver ev(qm.params, qm.profile.grid);
  const ComplexPlane phi0 = ev.to_phi(qm.profile.values);
  const double dt = qm.params.h / 20;
  const ComplexPlane there = run(ev, phi0, dt, 300);
  const ComplexPlane back = run(ev, there, -dt, 300);
  CHECK(plain_norm(there - phi0) > 1e-3 * plain_norm(phi0));
  CHECK(plain_norm(back - phi0) <= 1e-11 * plain_norm(phi0));
}

TEST_CASE("gauge covariance") {
  const auto qm = quasimode(2.0, 1, 1.0 / 16);
  const Complex g = std::polar(1.0, 0.7);
  EvolveOptions opt;
  opt.samples = 4;
  std::vector<ComplexPlane> plain, turned;
  evolve(qm.profile, qm.params, 0.5, opt,
         [&](int, double, const CylField& f) { plain.push_back(f.values); });
  CylField rotated = qm.profile;
  rotated.values *= g;
  evolve(rotated, qm.params, 0.5, opt,
         [&](int, double, const CylField& f) { turned.push_back(f.values); });
  REQUIRE(plain.size() == 5);
  for (size_t i = 0; i < plain.size(); ++i)
    CHECK(plain_norm(turned[i] - g * plain[i]) <= 1e-12 * plain_norm(plain[i]));
}

TEST_CASE("single steps agree with the driver") {
  const auto qm = quasimode(0.5, 1, 1.0 / 16);
  EvolveOptions opt;
  opt.samples = 1;
  opt.dt = qm.params.h / 20;
  CylField last;
  evolve(qm.profile, qm.params, 0.25, opt,
         [&](int, double, const CylField& f) { last = f; });
  auto state = make_state(qm.profile, qm.params);
  for (int n = 0; n < 80; ++n) state = step(state, opt.dt);
  CHECK(plain_norm(state.psi.values - last.values) <= 1e-9 * plain_norm(last.values));
}

TEST_CASE("deviation diagnostics start at zero and stay finite") {
  const auto qm = quasimode(0.5, 1, 1.0 / 16);
  const auto d = evolve_and_compare(qm, 0.5);
  REQUIRE(d.times.size() == 51);
  CHECK(d.times.front() == 0.0);
  CHECK(d.err_l2.front() == 0.0);
  CHECK(d.energy.front() == 0.0);
  CHECK(d.sqrt_energy.front() == 0.0);
  CHECK(d.mass_drift.front() == 0.0);
  CHECK(d.times.back() == doctest::Approx(0.5));
  CHECK(d.dt <= qm.params.h / 20);
  CHECK(d.steps * d.dt == doctest::Approx(0.5));
  CHECK(d.steps % 50 == 0);
  for (size_t i = 0; i < d.times.size(); ++i) {
    CHECK(std::isfinite(d.err_l2[i]));
    CHECK(std::isfinite(d.energy[i]));
    CHECK(d.mass_drift[i] <= 1e-8 * std::max(1.0, d.times[i]));
  }
}

TEST_CASE("deviation at t = 1 shrinks with h") {
  const auto e = terminal_errors(0.5, 1, {1.0 / 8, 1.0 / 16, 1.0 / 32}, 1.0);
  CHECK(e[1] < e[0]);
  CHECK(e[2] < e[1]);
}

TEST_CASE("deviation follows the h^{3/2} envelope") {
  const std::vector<double> hs{1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<DeviationDiagnostics> runs(hs.size());
  parallel_for(4, [&](int i) { runs[i] = evolve_and_compare(quasimode(0.05, 4, hs[i]), 1.0); });
  std::vector<double> w, intercepts;
  for (size_t i = 0; i < hs.size(); ++i) {
    const auto& d = runs[i];
    w.push_back(d.err_l2.back());
    for (double m : d.mass_drift) CHECK(m <= 1e-8);
    if (hs[i] <= 1.0 / 16) CHECK(d.max_edge <= 1e-10);
    std::vector<double> t, logf;
    for (size_t s = 10; s < d.times.size(); ++s) {
      t.push_back(d.times[s]);
      logf.push_back(std::log(d.sqrt_energy[s]));
    }
    intercepts.push_back(fit_line(t, logf).intercept);
  }
  const double slope = fit_loglog(hs, w).slope;
  CHECK(slope >= 1.2);
  CHECK(slope <= 1.8);
  std::vector<double> logh;
  for (double h : hs) logh.push_back(std::log(h));
  CHECK(fit_line(logh, intercepts).slope == doctest::Approx(1.5).epsilon(0.2));
}

TEST_CASE("linear flow from the quasimode") {
  const auto e = terminal_errors(0.0, 4, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, 1.0);
  const double slope = fit_loglog({1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, e).slope;
  CHECK(slope >= 1.2);
  CHECK(slope <= 1.8);
}

TEST_CASE("energy functional") {
  const auto p = params_for(0.0, 2, 1.0 / 16);
  const CylGrid g = evolution_grid(p);
  CylField zero{g, ComplexPlane::Zero(g.n_r, g.n_y)};
  CHECK(energy_functional(zero, p) == 0.0);

  // Gaussian bump, Laplacian in closed form, independent quadrature.
  const double s = 0.15, k = 2.0, h = p.h;
  CylField w{g, ComplexPlane(g.n_r, g.n_y)};
  double expect = 0.0, mass = 0.0;
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.r(i), y = g.y(j), x = r - k;
      const double f = std::exp(-(x * x + y * y) / (2 * s * s));
      w.values(i, j) = Complex(f, -0.5 * f);
      const double frr = (x * x / (s * s * s * s) - 1 / (s * s)) * f;
      const double fr = -x / (s * s) * f;
      const double fyy = (y * y / (s * s * s * s) - 1 / (s * s)) * f;
      const double lap = frr + fr / r + fyy - std::pow(k, 4) / (h * h * r * r) * f;
      const double q = r * r + y * y;
      expect += 1.25 * (0.5 * (q * q + 1) * f * f + std::pow(h, 4) * lap * lap) * r;
      mass += 1.25 * f * f * r;
    }
  expect *= 2 * std::numbers::pi * g.dr() * g.dy();
  mass *= 2 * std::numbers::pi * g.dr() * g.dy();
  const double e = energy_functional(w, p);
  CHECK(e == doctest::Approx(expect).epsilon(1e-8));
  CHECK(e >= 0.5 * mass);
  CylField scaled = w;
  scaled.values *= Complex(0.0, 3.0);
  CHECK(energy_functional(scaled, p) == doctest::Approx(9.0 * e).epsilon(1e-12));
}

TEST_CASE("cross term") {
  const auto p = params_for(0.0, 1, 1.0 / 64);
  const CylGrid g = evolution_grid(p, {2});
  CylField a{g, ComplexPlane::Zero(g.n_r, g.n_y)}, b = a;
  for (int i = 0; i < g.n_r; ++i) {
    if (g.r(i) < 1.2) a.values.row(i).setConstant(2.0);
    else b.values.row(i).setConstant(Complex(0.0, 1.0));
  }
  CHECK(cross_term(a, b) == 0.0);
  CylField c = a;
  c.values *= 0.5;
  CHECK(cross_term(a, c) == doctest::Approx(cross_term(c, a)));
  CHECK(cross_term(a, c) == doctest::Approx(cross_term(a, a) / 4));
  CylGrid other = g;
  other.n_r /= 2;
  CHECK_THROWS_AS(cross_term(a, {other, ComplexPlane::Zero(other.n_r, other.n_y)}), Error);
}

TEST_CASE("evolution rejects bad input") {
  const auto qm = quasimode(0.5, 1, 1.0 / 16);
  const auto state = make_state(qm.profile, qm.params);
  CHECK_THROWS_AS(step(state, 0.0), Error);
  CHECK_THROWS_AS(step(state, qm.params.h / 5), Error);
  EvolveOptions opt;
  CHECK_THROWS_AS(evolve_and_compare(qm, 3.0, opt), Error);  // beyond log(16)
  opt.dt = qm.params.h / 8;
  CHECK_THROWS_AS(evolve_and_compare(qm, 0.5, opt), Error);
  CylField edge = qm.profile;
  edge.values.row(0).setConstant(1.0);
  CHECK_THROWS_AS(evolve_and_compare({}, 0.5), Error);
  CHECK_THROWS_AS(evolve(edge, qm.params, 0.5, {}, [](int, double, const CylField&) {}),
                  Error);
  CylField bad = qm.profile;
  bad.values(40, 3) = std::nan("");
  CHECK_THROWS_AS(step(make_state(bad, qm.params), qm.params.h / 20), Error);
}
