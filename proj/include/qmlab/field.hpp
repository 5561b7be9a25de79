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

// Fields on the rescaled (rho, sigma) plane, where r = k + sqrt(h)*rho and
// y = sqrt(h)*sigma. The plane operator
//
//     P0 = -(d_rho^2 + d_sigma^2) + 4 rho^2 + sigma^2
//
// is discretized pseudo-spectrally on a periodic box; every field of
// interest decays fast enough that the box edges sit below roundoff.

#ifndef QMLAB_FIELD_HPP
#define QMLAB_FIELD_HPP

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "qmlab/spectral.hpp"

namespace qmlab {

/// Uniform periodic grid on [-extent_rho, extent_rho) x [-extent_sigma,
/// extent_sigma). Point counts must be powers of two.
struct PlaneGrid {
  double extent_rho = 6.0;
  double extent_sigma = 8.0;
  int n_rho = 256;
  int n_sigma = 256;

  /// Throws if the grid is unusable.
  void validate() const;

  double d_rho() const { return 2.0 * extent_rho / n_rho; }
  double d_sigma() const { return 2.0 * extent_sigma / n_sigma; }
  double cell() const { return d_rho() * d_sigma(); }
  double rho(int i) const { return -extent_rho + i * d_rho(); }
  double sigma(int j) const { return -extent_sigma + j * d_sigma(); }

  bool operator==(const PlaneGrid&) const = default;
};

/// Scalar configuration of one quasimode instance.
struct ProblemParams {
  double h = 1.0 / 16.0;
  int k = 1;
  double kappa = 1.0;
  double a = 0.0;
  /// Smallness bound on |a| kappa^2.
  double c0 = 0.5;

  double a_kappa_sq() const { return a * kappa * kappa; }
  /// 1/h rounded; only meaningful after validate().
  long inverse_h() const;
  void validate() const;
};

/// Complex samples on a PlaneGrid; rows index rho, columns index sigma.
class PlaneField {
 public:
  /// Empty placeholder holding no samples.
  PlaneField() = default;
  explicit PlaneField(const PlaneGrid& grid);
  PlaneField(const PlaneGrid& grid, ComplexPlane values);
  static PlaneField from_real(const PlaneGrid& grid, const RealPlane& values);
  static PlaneField sample(const PlaneGrid& grid,
                           const std::function<Complex(double, double)>& f);

  const PlaneGrid& grid() const { return grid_; }
  const ComplexPlane& values() const { return values_; }
  RealPlane real() const { return values_.real(); }
  double max_abs_imag() const;
  bool is_finite() const;
  bool empty() const { return values_.size() == 0; }

  PlaneField operator+(const PlaneField& o) const;
  PlaneField operator-(const PlaneField& o) const;
  PlaneField operator*(Complex c) const;

  /// Pointwise product with the function f(rho, sigma).
  PlaneField times(const std::function<double(double, double)>& f) const;
  /// Mirror rho -> -rho on the periodic grid (index i -> (n - i) mod n).
  PlaneField reflect_rho() const;
  PlaneField reflect_sigma() const;

 private:
  PlaneGrid grid_;
  ComplexPlane values_;
};

inline PlaneField operator*(Complex c, const PlaneField& f) { return f * c; }

/// The normalized harmonic ground state 2^{1/4} pi^{-1/2} exp(-(rho^2 +
/// sigma^2/2)), the a = 0 limit of the cascade's leading profile.
PlaneField harmonic_ground_state(const PlaneGrid& grid);
double harmonic_ground_state_value(double rho, double sigma);

PlaneField laplacian(const PlaneField& f);
PlaneField d_rho(const PlaneField& f);
PlaneField apply_p0(const PlaneField& f);

/// Real-valued kernels used by the solvers.
RealPlane laplacian(const PlaneGrid& g, const RealPlane& f);
RealPlane d_rho(const PlaneGrid& g, const RealPlane& f);
RealPlane apply_p0(const PlaneGrid& g, const RealPlane& f);
RealPlane p0_potential(const PlaneGrid& g);
RealPlane rho_power(const PlaneGrid& g, int p);

/// Discrete L^2 pairing sum conj(f) g d_rho d_sigma.
Complex inner(const PlaneField& f, const PlaneField& g);
double inner(const PlaneGrid& g, const RealPlane& a, const RealPlane& b);
double norm_l2(const PlaneField& f);
double norm_l2(const PlaneGrid& g, const RealPlane& f);
double norm_l4(const PlaneField& f);

/// arccos(|<f,g>| / (|f| |g|)) with the ratio clamped into [0, 1].
double projective_distance(Complex overlap, double norm_f, double norm_g);
double projective_distance(const PlaneField& f, const PlaneField& g);

/// Exact eigen-decomposition of the discrete P0. The discretization is a
/// Kronecker sum H_rho (+) H_sigma, so two dense 1-D symmetric eigenproblems
/// give every eigenpair. Used to apply functions of P0 (resolvents in the
/// gradient flow, preconditioners in the Krylov solvers).
class OscillatorBasis {
 public:
  explicit OscillatorBasis(const PlaneGrid& grid);

  const PlaneGrid& grid() const { return grid_; }
  const Eigen::VectorXd& rho_levels() const { return lambda_rho_; }
  const Eigen::VectorXd& sigma_levels() const { return lambda_sigma_; }

  RealPlane to_modes(const RealPlane& f) const;
  RealPlane from_modes(const RealPlane& c) const;

  /// Returns g(P0) f where g acts on eigenvalues.
  RealPlane apply_function(const RealPlane& f,
                           const std::function<double(double)>& g) const;

 private:
  PlaneGrid grid_;
  Eigen::MatrixXd q_rho_;
  Eigen::MatrixXd q_sigma_;
  Eigen::VectorXd lambda_rho_;
  Eigen::VectorXd lambda_sigma_;
};

}  // namespace qmlab

#endif  // QMLAB_FIELD_HPP
