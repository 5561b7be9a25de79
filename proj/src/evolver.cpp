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

#include "qmlab/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

bool fft_friendly(int n) {
  for (int f : {2, 3, 5})
    while (n % f == 0) n /= f;
  return n == 1;
}

// Smallest even 5-smooth size >= max(x, 16).
int friendly_size(double x) {
  int n = 16;
  while (n < x || n % 2 != 0 || !fft_friendly(n)) ++n;
  return n;
}

double edge_value(const ComplexPlane& v) {
  return std::max(v.topRows(3).cwiseAbs().maxCoeff(),
                  v.bottomRows(3).cwiseAbs().maxCoeff());
}

// exp(i theta); the series is exact to roundoff for |theta| <= 0.1, which
// covers the per-step nonlinear phase in practice.
Complex unit_phase(double theta) {
  if (std::abs(theta) > 0.1) return std::polar(1.0, theta);
  const double t2 = theta * theta;
  const double c =
      1.0 - t2 / 2.0 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0)));
  const double s =
      theta * (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0))));
  return {c, s};
}

void check_finite(const ComplexPlane& v, double t) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << "non-finite field during evolution at t = " << t;
    fail(ErrorCode::kNumerical, os.str());
  }
}

double omega_frame(const ProblemParams& p) { return 2.0 * p.k * p.k / p.h; }

// Drives the rotating-frame field; cb gets the frame field at each sample.
double run_frames(const CylField& psi0, const ProblemParams& params, double t_end,
                  const EvolveOptions& options,
                  const std::function<void(int, double, const ComplexPlane&)>& cb) {
  params.validate();
  psi0.grid.validate();
  require(psi0.grid.k == params.k, "field and parameters use different k");
  require(psi0.values.rows() == psi0.grid.n_r && psi0.values.cols() == psi0.grid.n_y,
          "field shape differs from its grid");
  require(t_end > 0.0, "t_end must be positive");
  require(options.samples >= 1, "need at least one sample");
  require(options.alpha > 0.0, "alpha must be positive");
  const double h = params.h;
  if (t_end > options.alpha * std::log(1.0 / h)) {
    std::ostringstream os;
    os << "t_end = " << t_end << " exceeds alpha log(1/h) = "
       << options.alpha * std::log(1.0 / h);
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  const double dt_req = options.dt > 0.0 ? options.dt : h / 20.0;
  require(dt_req <= h / 10.0 * (1.0 + 1e-12), "dt must not exceed h/10");
  const double scale = psi0.values.cwiseAbs().maxCoeff();
  require(scale > 0.0, "initial field is zero");
  if (edge_value(psi0.values) > 1e-10 * scale)
    fail(ErrorCode::kInvalidArgument,
         "initial field does not vanish at the radial window edge");

  const double interval = t_end / options.samples;
  const int per = std::max(1, static_cast<int>(std::ceil(interval / dt_req - 1e-9)));
  const double dt = interval / per;

  Evolver ev(params, psi0.grid);
  ComplexPlane phi = ev.to_phi(psi0.values);
  cb(0, 0.0, psi0.values);
  for (int s = 1; s <= options.samples; ++s) {
    ev.advance(phi, dt, per);
    const double t = s * interval;
    check_finite(phi, t);
    cb(s, t, ev.to_psi(phi));
  }
  return dt;
}

}  // namespace

CylGrid evolution_grid(const ProblemParams& params, const std::vector<int>& cover) {
  params.validate();
  const double sh = std::sqrt(params.h);
  double lo = 0.5 * params.k, hi = 1.5 * params.k;
  int k_min = params.k;
  std::vector<int> ks = cover;
  ks.push_back(params.k);
  for (int k : ks) {
    require(k >= 1, "angular index must be positive");
    lo = std::min({lo, 0.5 * k, k - 8.0 * sh});
    hi = std::max({hi, 1.5 * k, k + 8.0 * sh});
    k_min = std::min(k_min, k);
  }
  lo = std::max(lo, 0.05 * k_min);
  CylGrid g;
  g.k = params.k;
  g.r_min = lo;
  g.r_max = hi;
  g.n_r = friendly_size((hi - lo) / (0.08 * sh) + 1.0);
  g.y_half = 9.0 * sh;
  g.n_y = 64;
  return g;
}

Evolver::Evolver(const ProblemParams& params, const CylGrid& grid)
    : params_(params), grid_(grid) {
  params.validate();
  grid.validate();
  require(grid.k == params.k, "grid and parameters use different k");
  const int nr = grid.n_r, ny = grid.n_y;
  const double h = params.h;
  const double k2 = static_cast<double>(params.k) * params.k;
  const auto kr = wavenumbers(nr, nr * grid.dr());
  const auto ky = wavenumbers(ny, 2.0 * grid.y_half);
  potential_.resize(nr, ny);
  inv_r_.resize(nr, ny);
  kinetic_.resize(nr, ny);
  sqrt_r_.resize(nr);
  for (int i = 0; i < nr; ++i) {
    const double r = grid.r(i);
    sqrt_r_(i) = std::sqrt(r);
    for (int j = 0; j < ny; ++j) {
      const double y = grid.y(j);
      potential_(i, j) =
          (k2 * k2 / (r * r) + r * r + y * y - 2.0 * k2) / h - h / (4.0 * r * r);
      inv_r_(i, j) = 1.0 / r;
      kinetic_(i, j) = h * (kr[i] * kr[i] + ky[j] * ky[j]);
    }
  }
}

void Evolver::prepare(double dt) {
  if (dt == cached_dt_) return;
  const Fft fft(FftAxis::kBoth, grid_.n_r, grid_.n_y);
  const Complex I(0.0, 1.0);
  kinetic_phase_ = (-I * dt * kinetic_.cast<Complex>()).array().exp() / fft.scale();
  potential_phase_ = (-0.5 * I * dt * potential_.cast<Complex>()).array().exp();
  full_phase_ = potential_phase_.array().square();
  cached_dt_ = dt;
}

void Evolver::potential(ComplexPlane& phi, double tau, const ComplexPlane& linear) const {
  const double a = params_.a;
  if (a == 0.0) {
    phi.array() *= linear.array();
    return;
  }
  const double c = -tau * a * params_.h;
  for (int j = 0; j < phi.cols(); ++j)
    for (int i = 0; i < phi.rows(); ++i) {
      Complex& v = phi(i, j);
      v *= linear(i, j) * unit_phase(c * std::norm(v) * inv_r_(i, j));
    }
}

void Evolver::step(ComplexPlane& phi, double dt) { advance(phi, dt, 1); }

void Evolver::advance(ComplexPlane& phi, double dt, int steps) {
  require(phi.rows() == grid_.n_r && phi.cols() == grid_.n_y,
          "field shape differs from the evolver grid");
  require(steps >= 1, "need at least one step");
  prepare(dt);
  const Fft fft(FftAxis::kBoth, grid_.n_r, grid_.n_y);
  // Inner half steps of neighbours merge into one full potential step.
  potential(phi, 0.5 * dt, potential_phase_);
  for (int n = 0; n < steps; ++n) {
    fft.forward(phi);
    phi.array() *= kinetic_phase_.array();
    fft.backward(phi);
    if (n + 1 < steps) potential(phi, dt, full_phase_);
  }
  potential(phi, 0.5 * dt, potential_phase_);
}

ComplexPlane Evolver::apply_linear(const ComplexPlane& phi) const {
  const Fft fft(FftAxis::kBoth, grid_.n_r, grid_.n_y);
  ComplexPlane k = phi;
  fft.forward(k);
  k.array() *= kinetic_.array() / fft.scale();
  fft.backward(k);
  return k + (potential_.array() * phi.array()).matrix();
}

ComplexPlane Evolver::kinetic_resolvent(const ComplexPlane& phi, double shift) const {
  require(shift > 0.0, "resolvent shift must be positive");
  const Fft fft(FftAxis::kBoth, grid_.n_r, grid_.n_y);
  ComplexPlane k = phi;
  fft.forward(k);
  k.array() /= (kinetic_.array() + shift) * fft.scale();
  fft.backward(k);
  return k;
}

ComplexPlane Evolver::to_phi(const ComplexPlane& psi) const {
  return sqrt_r_.asDiagonal() * psi;
}

ComplexPlane Evolver::to_psi(const ComplexPlane& phi) const {
  return sqrt_r_.cwiseInverse().asDiagonal() * phi;
}

double Evolver::frame_phase(double t) const {
  return 2.0 * params_.k * params_.k * t / params_.h;
}

EvolutionState make_state(const CylField& psi, const ProblemParams& params) {
  psi.grid.validate();
  require(psi.grid.k == params.k, "field and parameters use different k");
  const double n = cyl_norm(psi);
  return {.t = 0.0, .psi = psi, .params = params, .mass0 = n * n};
}

EvolutionState step(const EvolutionState& state, double dt) {
  const double h = state.params.h;
  require(dt > 0.0, "dt must be positive");
  require(dt <= h / 10.0 * (1.0 + 1e-12), "dt must not exceed h/10");
  Evolver ev(state.params, state.psi.grid);
  ComplexPlane phi = ev.to_phi(state.psi.values);
  ev.step(phi, dt);
  check_finite(phi, state.t + dt);
  EvolutionState next = state;
  next.t = state.t + dt;
  next.psi.values = ev.to_psi(phi) * std::polar(1.0, -ev.frame_phase(dt));
  return next;
}

double evolve(const CylField& psi0, const ProblemParams& params, double t_end,
              const EvolveOptions& options,
              const std::function<void(int, double, const CylField&)>& on_sample) {
  const double rate = omega_frame(params);
  return run_frames(psi0, params, t_end, options,
                    [&](int i, double t, const ComplexPlane& frame) {
                      on_sample(i, t, {psi0.grid, frame * std::polar(1.0, -rate * t)});
                    });
}

DeviationDiagnostics evolve_and_compare(
    const Quasimode& qm, double t_end, const EvolveOptions& options,
    const std::function<void(int, double, const CylField&)>& on_sample) {
  const ProblemParams& p = qm.params;
  const CylField& u0 = qm.profile;
  const double omega = qm.lambda - 2.0 * p.k * p.k / p.h;
  double mass0 = 0.0;
  DeviationDiagnostics d;
  d.dt = run_frames(u0, p, t_end, options, [&](int i, double t, const ComplexPlane& f) {
    const CylField w{u0.grid, f - u0.values * std::polar(1.0, -omega * t)};
    const double n = cyl_norm({u0.grid, f});
    if (i == 0) mass0 = n * n;
    d.times.push_back(t);
    d.err_l2.push_back(cyl_norm(w));
    d.energy.push_back(energy_functional(w, p));
    d.sqrt_energy.push_back(std::sqrt(d.energy.back()));
    d.mass_drift.push_back(std::abs(n * n - mass0) / mass0);
    d.max_edge = std::max(d.max_edge, edge_value(f));
    if (on_sample) on_sample(i, t, {u0.grid, f * std::polar(1.0, -omega_frame(p) * t)});
  });
  const double interval = t_end / options.samples;
  d.steps = static_cast<int>(std::lround(interval / d.dt)) * options.samples;
  return d;
}

double energy_functional(const CylField& w, const ProblemParams& params) {
  const CylGrid& g = w.grid;
  g.validate();
  require(g.k == params.k, "field and parameters use different k");
  if (!w.values.allFinite()) fail(ErrorCode::kNumerical, "non-finite field");
  const double h = params.h;
  const double k4 = std::pow(static_cast<double>(params.k), 4);
  const Fft fft(FftAxis::kBoth, g.n_r, g.n_y);
  const auto kr = wavenumbers(g.n_r, g.n_r * g.dr());
  const auto ky = wavenumbers(g.n_y, 2.0 * g.y_half);

  ComplexPlane phi(g.n_r, g.n_y);
  for (int i = 0; i < g.n_r; ++i) phi.row(i) = std::sqrt(g.r(i)) * w.values.row(i);
  ComplexPlane lap = phi;
  fft.forward(lap);
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i)
      lap(i, j) *= -(kr[i] * kr[i] + ky[j] * ky[j]) / fft.scale();
  fft.backward(lap);

  double s = 0.0;
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.r(i), y = g.y(j);
      const double q = r * r + y * y;
      const Complex l = lap(i, j) + (0.25 - k4 / (h * h)) * phi(i, j) / (r * r);
      s += 0.5 * (q * q + 1.0) * std::norm(w.values(i, j)) * r +
           h * h * h * h * std::norm(l);
    }
  return 2.0 * std::numbers::pi * s * g.dr() * g.dy();
}

double cross_term(const CylField& a, const CylField& b) {
  const CylGrid& g = a.grid;
  const CylGrid& o = b.grid;
  require(g.r_min == o.r_min && g.r_max == o.r_max && g.n_r == o.n_r &&
              g.y_half == o.y_half && g.n_y == o.n_y,
          "cross term needs both modes on one window");
  double s = 0.0;
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i)
      s += g.r(i) * std::norm(a.values(i, j)) * std::norm(b.values(i, j));
  return 2.0 * std::numbers::pi * s * g.dr() * g.dy();
}

}  // namespace qmlab
