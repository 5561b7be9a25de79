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

#ifndef QMLAB_GROUND_STATE_HPP
#define QMLAB_GROUND_STATE_HPP

#include <optional>
#include <vector>

#include "qmlab/field.hpp"

namespace qmlab {

/// Minimizer of J(u, b) = int |grad u|^2 + (4 rho^2 + sigma^2) u^2 + b/2 u^4
/// on the unit L^2 sphere, with b = a kappa^2, and its Lagrange multiplier.
struct GroundState {
  PlaneField v0;
  double a_kappa_sq = 0.0;
  double E0 = 0.0;
  double j_value = 0.0;
  int iterations = 0;
  /// Final |P0 v0 + b v0^3 - E0 v0|_{L^2}.
  double residual = 0.0;
  /// J along the accepted iterates (first entry is the initial guess).
  std::vector<double> energy_history;
};

struct GroundStateOptions {
  double tol = 1e-9;
  /// Gradient-flow time step; halved whenever a step would raise J.
  double tau = 0.5;
  double min_tau = 1e-6;
  int max_iters = 5000;
  /// Defaults to the harmonic ground state.
  std::optional<PlaneField> initial_guess;
};

/// J(u, b). Rejects u whose L^2 norm differs from 1 by more than 1e-6.
double evaluate_j(const PlaneField& u, double a_kappa_sq);

/// Gradient 2 (P0 u + b |u|^2 u) of the unconstrained functional.
PlaneField j_gradient(const PlaneField& u, double a_kappa_sq);

/// Normalized gradient flow: backward Euler in P0 (applied exactly in its
/// eigenbasis), explicit in the cubic term, renormalized after every step.
/// Stops on the Euler-Lagrange residual.
GroundState solve_ground_state(const ProblemParams& params,
                               const PlaneGrid& grid = {},
                               const GroundStateOptions& options = {});

/// Same, reusing a precomputed eigenbasis (parameter sweeps).
GroundState solve_ground_state(const ProblemParams& params,
                               const OscillatorBasis& basis,
                               const GroundStateOptions& options = {});

/// E0 = int |grad v|^2 + (4 rho^2 + sigma^2) v^2 + b v^4 for unit v.
double multiplier_e0(const PlaneGrid& g, const RealPlane& v, double b);

/// |P0 v + b v^3 - E0 v|_{L^2}.
double euler_lagrange_residual(const PlaneGrid& g, const RealPlane& v,
                               double b, double e0);

struct DecayFit {
  double rate = 0.0;       ///< c in C exp(-c(|rho| + |sigma|))
  double prefactor = 0.0;  ///< C
  double r2 = 0.0;
  int samples = 0;  ///< number of envelope bins
};

/// Least-squares fit of log|f| against -(|rho| + |sigma|) over the points
/// where 1e-10 < |f| < 1e-2. Points are binned in |rho| + |sigma| (one grid
/// spacing per bin) and the largest value per bin is fitted, so the result
/// describes the upper envelope. Throws if fewer than 3 bins qualify.
DecayFit fit_decay(const PlaneField& f);

}  // namespace qmlab

#endif  // QMLAB_GROUND_STATE_HPP
