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

#include "qmlab/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fftw3.h>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

using PlanKey = std::tuple<int, int, int, int>;  // axis, n0, n1, sign

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans are never destroyed; the cache lives for the process.
fftw_plan cached_plan(FftAxis axis, int n0, int n1, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  static std::map<PlanKey, fftw_plan> cache;
  const PlanKey key{static_cast<int>(axis), n0, n1, sign};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto* buf = fftw_alloc_complex(static_cast<size_t>(n0) * n1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  switch (axis) {
    case FftAxis::kBoth:
      // Column-major (n0 x n1): the first index is contiguous, which is the
      // last dimension in FFTW's row-major convention.
      plan = fftw_plan_dft_2d(n1, n0, buf, buf, sign, flags);
      break;
    case FftAxis::kFirst: {
      int n[] = {n0};
      plan = fftw_plan_many_dft(1, n, n1, buf, nullptr, 1, n0, buf, nullptr,
                                1, n0, sign, flags);
      break;
    }
    case FftAxis::kSecond: {
      int n[] = {n1};
      plan = fftw_plan_many_dft(1, n, n0, buf, nullptr, n0, 1, buf, nullptr,
                                n0, 1, sign, flags);
      break;
    }
  }
  fftw_free(buf);
  if (plan == nullptr) fail(ErrorCode::kInternal, "FFTW plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

Fft::Fft(FftAxis axis, int n0, int n1) : n0_(n0), n1_(n1) {
  require(n0 > 0 && n1 > 0, "FFT shape must be positive");
  forward_plan_ = cached_plan(axis, n0, n1, FFTW_FORWARD);
  backward_plan_ = cached_plan(axis, n0, n1, FFTW_BACKWARD);
  switch (axis) {
    case FftAxis::kBoth: scale_ = double(n0) * n1; break;
    case FftAxis::kFirst: scale_ = n0; break;
    case FftAxis::kSecond: scale_ = n1; break;
  }
}

void Fft::forward(ComplexPlane& a) const {
  require(a.rows() == n0_ && a.cols() == n1_, "FFT shape mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void Fft::backward(ComplexPlane& a) const {
  require(a.rows() == n0_ && a.cols() == n1_, "FFT shape mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
}

std::vector<double> wavenumbers(int n, double period) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / period;
  for (int m = 0; m < n; ++m) {
    const int freq = (m <= n / 2) ? m : m - n;
    k[m] = base * freq;
  }
  return k;
}

std::vector<Complex> first_derivative_symbol(int n, double period) {
  const auto k = wavenumbers(n, period);
  std::vector<Complex> s(n);
  for (int m = 0; m < n; ++m) s[m] = Complex(0.0, k[m]);
  if (n % 2 == 0) s[n / 2] = 0.0;
  return s;
}

namespace {

Eigen::MatrixXd derivative_matrix(int n, double period, int order) {
  ComplexPlane a = ComplexPlane::Identity(n, n);
  Fft fft(FftAxis::kFirst, n, n);
  fft.forward(a);
  const auto k = wavenumbers(n, period);
  const auto d1 = first_derivative_symbol(n, period);
  for (int m = 0; m < n; ++m) {
    const Complex sym = (order == 1) ? d1[m] : Complex(-k[m] * k[m], 0.0);
    a.row(m) *= sym;
  }
  fft.backward(a);
  return a.real() / fft.scale();
}

}  // namespace

Eigen::MatrixXd fourier_d1_matrix(int n, double period) {
  return derivative_matrix(n, period, 1);
}

Eigen::MatrixXd fourier_d2_matrix(int n, double period) {
  return derivative_matrix(n, period, 2);
}

Eigen::MatrixXd trig_interpolation_matrix(const std::vector<double>& targets,
                                          int n, double origin,
                                          double spacing) {
  require(n % 2 == 0, "trigonometric interpolation needs an even point count");
  const double period = n * spacing;
  const double pi = std::numbers::pi;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(targets.size()), n);
  for (size_t t = 0; t < targets.size(); ++t) {
    for (int i = 0; i < n; ++i) {
      const double d = targets[t] - (origin + i * spacing);
      const double s = std::sin(pi * d / spacing);
      const double tn = std::tan(pi * d / period);
      double value;
      if (std::abs(s) < 1e-14) {
        // On a node (or a periodic image of one).
        const double cycles = d / spacing;
        const long nearest = std::lround(cycles);
        value = (((nearest % n) + n) % n == 0) ? 1.0 : 0.0;
      } else {
        value = s / (n * tn);
      }
      m(static_cast<Eigen::Index>(t), i) = value;
    }
  }
  return m;
}

}  // namespace qmlab
