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

// Shared generators for the property-style tests.

#ifndef QMLAB_TESTS_TEST_SUPPORT_HPP
#define QMLAB_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <random>

#include "qmlab/field.hpp"

namespace qmlab::testing {

/// Random smooth, rapidly decaying complex field: a random polynomial of
/// degree <= 3 in (rho, sigma) times a Gaussian of random width and centre.
inline PlaneField random_smooth_field(const PlaneGrid& g, std::mt19937& rng,
                                      bool real_only = false) {
  std::normal_distribution<double> n01(0.0, 1.0);
  std::uniform_real_distribution<double> width(0.6, 1.4);
  std::uniform_real_distribution<double> shift(-0.7, 0.7);
  double coef_re[4][4], coef_im[4][4];
  for (auto& row : coef_re)
    for (double& c : row) c = n01(rng);
  for (auto& row : coef_im)
    for (double& c : row) c = real_only ? 0.0 : n01(rng);
  const double wr = width(rng), ws = width(rng);
  const double cr = shift(rng), cs = shift(rng);
  return PlaneField::sample(g, [&](double r, double s) {
    Complex p = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j + i < 4; ++j)
        p += Complex(coef_re[i][j], coef_im[i][j]) * std::pow(r, i) *
             std::pow(s, j);
    const double x = (r - cr) / wr, y = (s - cs) / ws;
    return p * std::exp(-(x * x + 0.5 * y * y));
  });
}

inline PlaneGrid small_grid() { return PlaneGrid{6.0, 8.0, 64, 64}; }
inline PlaneGrid medium_grid() { return PlaneGrid{6.0, 8.0, 128, 128}; }

}  // namespace qmlab::testing

#endif  // QMLAB_TESTS_TEST_SUPPORT_HPP
