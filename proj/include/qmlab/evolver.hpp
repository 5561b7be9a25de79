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

#ifndef QMLAB_EVOLVER_HPP
#define QMLAB_EVOLVER_HPP

#include <functional>
#include <vector>

#include "qmlab/quasimode.hpp"

namespace qmlab {

/// Window for time integration: the hull of [k - 8 sqrt(h), k + 8 sqrt(h)]
/// and the cutoff support, clipped at r = 0.05 k (smallest k covered); radial spacing at most
/// 0.08 sqrt(h) (even 5-smooth count), y_half = 9 sqrt(h), n_y = 64.
/// `cover` lists further angular indices whose windows must fit as well.
CylGrid evolution_grid(const ProblemParams& params, const std::vector<int>& cover = {});

/// Split-step Fourier integrator of
///   i h psi_t = -h^2 Delta psi + |x|^2 psi + a h^2 |psi|^2 psi
/// for psi = exp(i k^2 theta / h) psi(t, r, y). Works on phi = sqrt(r) psi,
/// periodic in r and y over the window, in the frame rotating with
/// exp(-2 i k^2 t / h). Strang order: half potential + nonlinear phase,
/// full kinetic, half potential + nonlinear phase.
class Evolver {
 public:
  Evolver(const ProblemParams& params, const CylGrid& grid);

  const CylGrid& grid() const { return grid_; }
  const ProblemParams& params() const { return params_; }

  /// One Strang step of size dt (negative dt runs backwards).
  void step(ComplexPlane& phi, double dt);
  /// `steps` Strang steps with the inner half steps fused.
  void advance(ComplexPlane& phi, double dt, int steps);

  /// Linear generator in the rotating frame (used by eigenmode checks).
  ComplexPlane apply_linear(const ComplexPlane& phi) const;
  /// (-h (d_rr + d_yy) + shift)^{-1}, shift > 0.
  ComplexPlane kinetic_resolvent(const ComplexPlane& phi, double shift) const;

  ComplexPlane to_phi(const ComplexPlane& psi) const;
  ComplexPlane to_psi(const ComplexPlane& phi) const;
  /// Frame rotation angle 2 k^2 t / h.
  double frame_phase(double t) const;

 private:
  ProblemParams params_;
  CylGrid grid_;
  RealPlane potential_;    // (k^4/r^2 + r^2 + y^2 - 2k^2)/h - h/(4 r^2)
  RealPlane inv_r_;        // 1/r per row, broadcast
  RealPlane kinetic_;      // h (kr^2 + ky^2)
  Eigen::VectorXd sqrt_r_;
  double cached_dt_ = 0.0;
  ComplexPlane kinetic_phase_;
  ComplexPlane potential_phase_;  // half step
  ComplexPlane full_phase_;

  void prepare(double dt);
  void potential(ComplexPlane& phi, double tau, const ComplexPlane& linear) const;
};

struct EvolutionState {
  double t = 0.0;
  CylField psi;
  ProblemParams params;
  double mass0 = 0.0;
};

/// Fresh state; mass0 = |psi|^2 in L^2(R^3).
EvolutionState make_state(const CylField& psi, const ProblemParams& params);

/// One step, dt > 0 and dt <= h/10. Aborts on non-finite values.
EvolutionState step(const EvolutionState& state, double dt);

struct DeviationDiagnostics {
  std::vector<double> times;
  std::vector<double> err_l2;
  std::vector<double> energy;
  std::vector<double> sqrt_energy;
  std::vector<double> mass_drift;  ///< |mass(t) - mass0| / mass0
  double max_edge = 0.0;           ///< largest |psi| on the window edges
  double dt = 0.0;
  int steps = 0;
};

struct EvolveOptions {
  /// Default h/20.
  double dt = 0.0;
  int samples = 50;
  /// Rejects t_end > alpha log(1/h).
  double alpha = 1.0;
};

/// Calls on_sample(i, t, psi) at t = 0 and after each of `samples` equal
/// intervals up to t_end. Returns the time step used.
double evolve(const CylField& psi0, const ProblemParams& params, double t_end,
              const EvolveOptions& options,
              const std::function<void(int, double, const CylField&)>& on_sample);

/// Evolves from u_app(0) and compares with exp(-i lambda t) u_app(0).
/// on_sample, if set, sees the evolved profile at every sample time.
DeviationDiagnostics evolve_and_compare(
    const Quasimode& qm, double t_end, const EvolveOptions& options = {},
    const std::function<void(int, double, const CylField&)>& on_sample = {});

/// int (1/2 ((r^2 + y^2)^2 + 1) |w|^2 + h^4 |Delta w|^2) over R^3 for the
/// single-mode profile w, Laplacian taken spectrally with the angular term.
double energy_functional(const CylField& w, const ProblemParams& params);

/// int |a|^2 |b|^2 over R^3 for two profiles on the same window.
double cross_term(const CylField& a, const CylField& b);

}  // namespace qmlab

#endif  // QMLAB_EVOLVER_HPP
