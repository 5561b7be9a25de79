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

#include "qmlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qmlab/error.hpp"

namespace qmlab {

void PlaneGrid::validate() const {
  require(extent_rho > 0.0 && extent_sigma > 0.0,
          "plane grid extents must be positive");
  auto pow2 = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
  require(pow2(n_rho) && pow2(n_sigma),
          "plane grid point counts must be powers of two, at least 8");
}

long ProblemParams::inverse_h() const { return std::lround(1.0 / h); }

void ProblemParams::validate() const {
  require(h > 0.0 && h <= 1.0, "h must lie in (0, 1]");
  const double inv = 1.0 / h;
  require(std::abs(inv - std::round(inv)) <= 1e-9 * inv,
          "1/h must be a positive integer");
  require(k >= 1, "angular index k must be a positive integer");
  require(kappa > 0.0, "kappa must be positive");
  require(std::isfinite(a), "coupling a must be finite");
  require(c0 > 0.0, "smallness constant c0 must be positive");
  if (std::abs(a_kappa_sq()) > c0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "|a| kappa^2 = " << std::abs(a_kappa_sq())
       << " exceeds the smallness constant c0 = " << c0;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

PlaneField::PlaneField(const PlaneGrid& grid)
    : grid_(grid), values_(ComplexPlane::Zero(grid.n_rho, grid.n_sigma)) {
  grid_.validate();
}

PlaneField::PlaneField(const PlaneGrid& grid, ComplexPlane values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  require(values_.rows() == grid_.n_rho && values_.cols() == grid_.n_sigma,
          "field shape does not match its grid");
}

PlaneField PlaneField::from_real(const PlaneGrid& grid,
                                 const RealPlane& values) {
  return PlaneField(grid, values.cast<Complex>());
}

PlaneField PlaneField::sample(const PlaneGrid& grid,
                              const std::function<Complex(double, double)>& f) {
  ComplexPlane v(grid.n_rho, grid.n_sigma);
  for (int j = 0; j < grid.n_sigma; ++j)
    for (int i = 0; i < grid.n_rho; ++i) v(i, j) = f(grid.rho(i), grid.sigma(j));
  return PlaneField(grid, std::move(v));
}

double PlaneField::max_abs_imag() const {
  return values_.imag().cwiseAbs().maxCoeff();
}

bool PlaneField::is_finite() const { return values_.allFinite(); }

PlaneField PlaneField::operator+(const PlaneField& o) const {
  require(grid_ == o.grid_, "grid mismatch");
  return PlaneField(grid_, values_ + o.values_);
}

PlaneField PlaneField::operator-(const PlaneField& o) const {
  require(grid_ == o.grid_, "grid mismatch");
  return PlaneField(grid_, values_ - o.values_);
}

PlaneField PlaneField::operator*(Complex c) const {
  return PlaneField(grid_, values_ * c);
}

PlaneField PlaneField::times(
    const std::function<double(double, double)>& f) const {
  ComplexPlane v = values_;
  for (int j = 0; j < grid_.n_sigma; ++j)
    for (int i = 0; i < grid_.n_rho; ++i)
      v(i, j) *= f(grid_.rho(i), grid_.sigma(j));
  return PlaneField(grid_, std::move(v));
}

PlaneField PlaneField::reflect_rho() const {
  ComplexPlane v(grid_.n_rho, grid_.n_sigma);
  const int n = grid_.n_rho;
  for (int i = 0; i < n; ++i) v.row(i) = values_.row((n - i) % n);
  return PlaneField(grid_, std::move(v));
}

PlaneField PlaneField::reflect_sigma() const {
  ComplexPlane v(grid_.n_rho, grid_.n_sigma);
  const int n = grid_.n_sigma;
  for (int j = 0; j < n; ++j) v.col(j) = values_.col((n - j) % n);
  return PlaneField(grid_, std::move(v));
}

double harmonic_ground_state_value(double rho, double sigma) {
  return std::pow(2.0, 0.25) / std::sqrt(std::numbers::pi) *
         std::exp(-(rho * rho + 0.5 * sigma * sigma));
}

PlaneField harmonic_ground_state(const PlaneGrid& grid) {
  return PlaneField::sample(grid, [](double r, double s) {
    return Complex(harmonic_ground_state_value(r, s), 0.0);
  });
}

namespace {

void require_finite(const ComplexPlane& v) {
  if (!v.allFinite())
    fail(ErrorCode::kNumerical, "non-finite values in plane field");
}

ComplexPlane spectral_laplacian(const PlaneGrid& g, ComplexPlane v) {
  Fft fft(FftAxis::kBoth, g.n_rho, g.n_sigma);
  fft.forward(v);
  const auto kr = wavenumbers(g.n_rho, 2.0 * g.extent_rho);
  const auto ks = wavenumbers(g.n_sigma, 2.0 * g.extent_sigma);
  for (int j = 0; j < g.n_sigma; ++j)
    for (int i = 0; i < g.n_rho; ++i)
      v(i, j) *= -(kr[i] * kr[i] + ks[j] * ks[j]) / fft.scale();
  fft.backward(v);
  return v;
}

ComplexPlane spectral_d_rho(const PlaneGrid& g, ComplexPlane v) {
  Fft fft(FftAxis::kFirst, g.n_rho, g.n_sigma);
  fft.forward(v);
  const auto sym = first_derivative_symbol(g.n_rho, 2.0 * g.extent_rho);
  for (int i = 0; i < g.n_rho; ++i) v.row(i) *= sym[i] / fft.scale();
  fft.backward(v);
  return v;
}

}  // namespace

RealPlane p0_potential(const PlaneGrid& g) {
  RealPlane v(g.n_rho, g.n_sigma);
  for (int j = 0; j < g.n_sigma; ++j)
    for (int i = 0; i < g.n_rho; ++i) {
      const double r = g.rho(i), s = g.sigma(j);
      v(i, j) = 4.0 * r * r + s * s;
    }
  return v;
}

RealPlane rho_power(const PlaneGrid& g, int p) {
  RealPlane v(g.n_rho, g.n_sigma);
  for (int i = 0; i < g.n_rho; ++i) v.row(i).setConstant(std::pow(g.rho(i), p));
  return v;
}

PlaneField laplacian(const PlaneField& f) {
  require_finite(f.values());
  return PlaneField(f.grid(), spectral_laplacian(f.grid(), f.values()));
}

PlaneField d_rho(const PlaneField& f) {
  require_finite(f.values());
  return PlaneField(f.grid(), spectral_d_rho(f.grid(), f.values()));
}

PlaneField apply_p0(const PlaneField& f) {
  require_finite(f.values());
  const auto& g = f.grid();
  ComplexPlane out = -spectral_laplacian(g, f.values());
  out += (p0_potential(g).array() * f.values().array()).matrix();
  return PlaneField(g, std::move(out));
}

RealPlane laplacian(const PlaneGrid& g, const RealPlane& f) {
  return spectral_laplacian(g, f.cast<Complex>()).real();
}

RealPlane d_rho(const PlaneGrid& g, const RealPlane& f) {
  return spectral_d_rho(g, f.cast<Complex>()).real();
}

RealPlane apply_p0(const PlaneGrid& g, const RealPlane& f) {
  if (!f.allFinite())
    fail(ErrorCode::kNumerical, "non-finite values in plane field");
  return -laplacian(g, f) + RealPlane(p0_potential(g).cwiseProduct(f));
}

Complex inner(const PlaneField& f, const PlaneField& g) {
  require(f.grid() == g.grid(), "inner product of fields on different grids");
  const Complex s = (f.values().conjugate().array() * g.values().array()).sum();
  return s * f.grid().cell();
}

double inner(const PlaneGrid& g, const RealPlane& a, const RealPlane& b) {
  return a.cwiseProduct(b).sum() * g.cell();
}

double norm_l2(const PlaneField& f) {
  return std::sqrt(f.values().squaredNorm() * f.grid().cell());
}

double norm_l2(const PlaneGrid& g, const RealPlane& f) {
  return std::sqrt(f.squaredNorm() * g.cell());
}

double norm_l4(const PlaneField& f) {
  const double s = f.values().cwiseAbs2().array().square().sum();
  return std::pow(s * f.grid().cell(), 0.25);
}

double projective_distance(Complex overlap, double norm_f, double norm_g) {
  require(norm_f > 0.0 && norm_g > 0.0,
          "projective distance needs nonzero vectors");
  const double ratio = std::clamp(std::abs(overlap) / (norm_f * norm_g), 0.0, 1.0);
  return std::acos(ratio);
}

double projective_distance(const PlaneField& f, const PlaneField& g) {
  return projective_distance(inner(f, g), norm_l2(f), norm_l2(g));
}

OscillatorBasis::OscillatorBasis(const PlaneGrid& grid) : grid_(grid) {
  grid_.validate();
  auto build = [](int n, double extent, double stiffness, double spacing,
                  Eigen::MatrixXd& q, Eigen::VectorXd& lambda) {
    Eigen::MatrixXd hmat = -fourier_d2_matrix(n, 2.0 * extent);
    for (int i = 0; i < n; ++i) {
      const double x = -extent + i * spacing;
      hmat(i, i) += stiffness * x * x;
    }
    // Symmetrize away FFT roundoff before the symmetric solve.
    hmat = 0.5 * (hmat + hmat.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hmat);
    if (es.info() != Eigen::Success)
      fail(ErrorCode::kNumerical, "oscillator eigen-decomposition failed");
    q = es.eigenvectors();
    lambda = es.eigenvalues();
  };
  build(grid_.n_rho, grid_.extent_rho, 4.0, grid_.d_rho(), q_rho_, lambda_rho_);
  build(grid_.n_sigma, grid_.extent_sigma, 1.0, grid_.d_sigma(), q_sigma_,
        lambda_sigma_);
}

RealPlane OscillatorBasis::to_modes(const RealPlane& f) const {
  return q_rho_.transpose() * f * q_sigma_;
}

RealPlane OscillatorBasis::from_modes(const RealPlane& c) const {
  return q_rho_ * c * q_sigma_.transpose();
}

RealPlane OscillatorBasis::apply_function(
    const RealPlane& f, const std::function<double(double)>& g) const {
  RealPlane c = to_modes(f);
  for (int j = 0; j < c.cols(); ++j)
    for (int i = 0; i < c.rows(); ++i)
      c(i, j) *= g(lambda_rho_(i) + lambda_sigma_(j));
  return from_modes(c);
}

}  // namespace qmlab
