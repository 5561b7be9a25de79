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

// Matrix-free symmetric Krylov solvers on flat real vectors.

#ifndef QMLAB_KRYLOV_HPP
#define QMLAB_KRYLOV_HPP

#include <functional>

#include <Eigen/Dense>

namespace qmlab {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;  ///< true Euclidean residual |b - A x|
  bool converged = false;
};

/// Preconditioned MINRES for symmetric A and symmetric positive definite M
/// (M approximates the inverse of A). Restarts on the true residual until
/// |b - A x| <= tol or max_iters inner iterations were spent. x holds the
/// initial guess on entry.
KrylovResult minres(const LinearMap& a, const LinearMap& m,
                    const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol,
                    int max_iters);

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;    ///< Euclidean-orthonormal columns
  Eigen::VectorXd residuals;  ///< |A x - theta x| per pair
  int iterations = 0;
  bool converged = false;
};

/// Lowest nev eigenpairs of symmetric A by block Davidson with
/// preconditioner M (SPD). The columns of start seed the search space and
/// should cover every symmetry class of interest.
EigenResult lowest_eigenpairs(const LinearMap& a, const LinearMap& m,
                              const Eigen::MatrixXd& start, int nev,
                              double tol, int max_iters, int max_basis = 48);

}  // namespace qmlab

#endif  // QMLAB_KRYLOV_HPP
