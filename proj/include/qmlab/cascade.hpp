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

#ifndef QMLAB_CASCADE_HPP
#define QMLAB_CASCADE_HPP

#include <array>
#include <optional>

#include "qmlab/ground_state.hpp"

namespace qmlab {

/// Two lowest eigenvalues of L = P0 + 3 b v0^2 - E0.
struct SpectralGapReport {
  double mu0 = 0.0;
  double mu1 = 0.0;
  PlaneField w0;
  /// Neither mu0 nor mu1 within delta of zero.
  bool gap_ok = false;
  double delta = 1e-3;
  std::array<double, 2> residuals{};  ///< |L w - mu w|_{L^2}
  int iterations = 0;
};

struct CascadeOptions {
  /// Bound on |L v - f|_{L^2} for each level.
  double tol = 1e-9;
  int max_iters = 500;
  double gap_delta = 1e-3;
  double eig_tol = 1e-9;
};

/// One level of the cascade: (P(b) - E0) v = f with E fixed by <f, v0> = 0.
struct LevelSolution {
  PlaneField v;
  double E = 0.0;
  PlaneField rhs;
  double residual = 0.0;
  /// <f, v0> after the selection of E.
  double solvability = 0.0;
  int iterations = 0;
  /// True when the solve was restricted to the complement of v0.
  bool projected = false;
};

struct CascadeSolution {
  GroundState ground;
  PlaneField v1;
  double E1 = 0.0;
  PlaneField v2;
  double E2 = 0.0;
  int k = 1;
  std::array<double, 2> linear_residuals{};
  std::array<int, 2> iterations{};
  SpectralGapReport gap;
};

/// (P0 + 3 b v0^2 - E0) f. Rejects a coupling that differs from the one the
/// ground state was computed for, and fields on another grid.
PlaneField apply_linearized(const PlaneField& f, const GroundState& ground,
                            double a_kappa_sq);

SpectralGapReport spectral_gap(const GroundState& ground, double a_kappa_sq,
                               const CascadeOptions& options = {});

/// Level 1. Uses `gap` when supplied instead of recomputing it.
LevelSolution solve_level1(const GroundState& ground,
                           const ProblemParams& params,
                           const CascadeOptions& options = {},
                           const std::optional<SpectralGapReport>& gap = {});

/// Level 2 from the level-1 pair (v1, E1).
LevelSolution solve_level2(const GroundState& ground, const PlaneField& v1,
                           double E1, const ProblemParams& params,
                           const CascadeOptions& options = {},
                           const std::optional<SpectralGapReport>& gap = {});

/// Right-hand sides without the E term, i.e. f = E v0 + source.
PlaneField level1_source(const GroundState& ground, int k);
PlaneField level2_source(const GroundState& ground, const PlaneField& v1,
                         double E1, int k);

/// Ground state, spectral gap and both levels.
CascadeSolution solve_cascade(const ProblemParams& params,
                              const PlaneGrid& grid = {},
                              const CascadeOptions& options = {},
                              const GroundStateOptions& gs_options = {});

/// Levels only, for a ground state already at hand (it depends on b only).
CascadeSolution solve_cascade(const GroundState& ground,
                              const ProblemParams& params,
                              const CascadeOptions& options = {});

}  // namespace qmlab

#endif  // QMLAB_CASCADE_HPP
