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

#ifndef QMLAB_QUASIMODE_HPP
#define QMLAB_QUASIMODE_HPP

#include <array>
#include <vector>

#include "qmlab/cascade.hpp"
#include "qmlab/fit.hpp"

namespace qmlab {

/// Radial-axial window of the single angular mode exp(i k^2 theta / h).
/// r is sampled with both endpoints, y periodically on [-y_half, y_half).
struct CylGrid {
  double r_min = 0.45;
  double r_max = 1.55;
  int n_r = 512;
  double y_half = 2.0;
  int n_y = 256;
  int k = 1;

  void validate() const;
  double dr() const { return (r_max - r_min) / (n_r - 1); }
  double dy() const { return 2.0 * y_half / n_y; }
  double r(int i) const { return r_min + i * dr(); }
  double y(int j) const { return -y_half + j * dy(); }

  bool operator==(const CylGrid&) const = default;
};

/// Window [0.45k, 1.55k] x [-L_sigma sqrt(h), L_sigma sqrt(h)) with the
/// y samples landing on the plane grid's sigma nodes.
CylGrid default_cyl_grid(const ProblemParams& params, const PlaneGrid& plane,
                         int n_r = 512);

/// Field on a CylGrid (rows r, columns y): the radial-axial profile of a
/// single angular mode.
struct CylField {
  CylGrid grid;
  ComplexPlane values;
};

/// C-infinity bump: 0 outside [support_lo, support_hi], 1 on the plateau,
/// exp-based smooth steps in between.
struct CutoffSpec {
  double support_lo = 0.5;
  double support_hi = 1.5;
  double plateau_lo = 0.75;
  double plateau_hi = 1.25;

  void validate() const;
  double operator()(double x) const;
};

/// Smooth step 0 -> 1 on [0, 1], flat to all orders at both ends.
double smooth_step(double t);

struct BuildOptions {
  /// Number of correction levels kept: 0 (v0 only), 1 or 2.
  int levels = 2;
  bool cutoff = true;
};

struct Quasimode {
  ProblemParams params;
  CascadeSolution cascade;
  CylField profile;  ///< kappa h^{-1/2} chi(r/k) v((r-k)/sqrt(h), y/sqrt(h))
  double lambda = 0.0;
  long angular_number = 0;  ///< k^2 / h
  CutoffSpec cutoff;
  BuildOptions options;
};

/// 2k^2/h + E0 + sqrt(h) E1 + h E2, truncated after `levels` corrections.
double quasimode_lambda(double h, int k, double E0, double E1, double E2,
                        int levels = 2);

/// Coefficients c_n of k^4/r^2 + r^2 = sum c_n (r - k)^n, n = 0..4, in the
/// scaled form 2k^2 + 4 rho^2 h - (4/k) rho^3 h^{3/2} + (5/k^2) rho^4 h^2.
std::array<double, 5> radial_taylor_coefficients(int k);

/// k^4/r^2 + r^2 + y^2.
double cylinder_potential(double r, double y, int k);

Quasimode build_quasimode(const CascadeSolution& cascade,
                          const ProblemParams& params, const CylGrid& grid,
                          const BuildOptions& options = {},
                          const CutoffSpec& cutoff = {});

/// Residual profile R of
///   i h u_t + h^2 Delta u - |x|^2 u - a h^2 |u|^2 u = R
/// for u = exp(-i lambda t) exp(i k^2 theta / h) profile.
CylField compute_residual(const Quasimode& qm);

/// Laplacian of a single-mode profile, angular part -k^4/(h^2 r^2) included.
CylField cylinder_laplacian(const CylField& f, double h);

/// L^2(R^3) norm of exp(i m theta) f: sqrt(2 pi int |f|^2 r dr dy).
double cyl_norm(const CylField& f);
/// Same with the weight (r^2 + y^2 + 1).
double cyl_weighted_norm(const CylField& f);
/// L^2(R^3) inner product of two profiles of the same angular mode.
Complex cyl_inner(const CylField& f, const CylField& g);

struct ResidualReport {
  std::vector<double> h_values;
  std::vector<double> weighted_norms;   ///< |(|x|^2 + 1) R|
  std::vector<double> laplacian_norms;  ///< |Delta R|
  std::vector<double> tail_norms;       ///< |R - chi R_uncut|
  std::vector<double> profile_norms;    ///< |u_app| / sqrt(2 pi k)
  LineFit weighted_fit;
  LineFit laplacian_fit;
  std::array<double, 2> fitted_slopes{};
};

/// Residual norms across h for one cascade (the cascade is h-independent).
/// The h runs go through the worker pool.
ResidualReport residual_scaling_study(const ProblemParams& base,
                                      const std::vector<double>& h_list,
                                      const PlaneGrid& plane = {},
                                      int n_r = 512,
                                      const BuildOptions& options = {});

ResidualReport residual_scaling_study(const CascadeSolution& cascade,
                                      const ProblemParams& base,
                                      const std::vector<double>& h_list,
                                      int n_r = 512,
                                      const BuildOptions& options = {});

}  // namespace qmlab

#endif  // QMLAB_QUASIMODE_HPP
