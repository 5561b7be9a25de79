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

#ifndef QMLAB_SPECTRAL_HPP
#define QMLAB_SPECTRAL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qmlab {

using Complex = std::complex<double>;
using RealPlane = Eigen::MatrixXd;
using ComplexPlane = Eigen::MatrixXcd;

/// Which axis of a column-major (n0 x n1) array a transform runs along.
enum class FftAxis { kBoth, kFirst, kSecond };

/// Thin wrapper over a cached FFTW plan. Transforms are unnormalized and
/// in place. Plans are created once per (axis, shape, direction) and shared;
/// executing them concurrently is safe.
class Fft {
 public:
  Fft(FftAxis axis, int n0, int n1);

  void forward(ComplexPlane& a) const;
  void backward(ComplexPlane& a) const;

  /// Number of points the backward transform must be divided by.
  double scale() const { return scale_; }

 private:
  void* forward_plan_;
  void* backward_plan_;
  int n0_;
  int n1_;
  double scale_;
};

/// Angular wavenumbers 2*pi*m/period in FFT order. The Nyquist entry is
/// kept (it carries -k^2 in second derivatives); callers that need an odd
/// operator zero it through `first_derivative_symbol`.
std::vector<double> wavenumbers(int n, double period);

/// i*k with the Nyquist mode removed.
std::vector<Complex> first_derivative_symbol(int n, double period);

/// Dense matrices of the Fourier pseudo-spectral derivatives on n periodic
/// points. Built by transforming the identity, so they agree with the
/// FFT-applied operators to roundoff.
Eigen::MatrixXd fourier_d1_matrix(int n, double period);
Eigen::MatrixXd fourier_d2_matrix(int n, double period);

/// Matrix evaluating the periodic trigonometric interpolant of samples on the
/// uniform grid {origin + i*spacing} at arbitrary targets.
Eigen::MatrixXd trig_interpolation_matrix(const std::vector<double>& targets,
                                          int n, double origin, double spacing);

}  // namespace qmlab

#endif  // QMLAB_SPECTRAL_HPP
