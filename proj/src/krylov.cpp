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

#include "qmlab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// One MINRES sweep from x = 0; stops once the preconditioned residual
// estimate has dropped by `reduction`.
int minres_sweep(const LinearMap& a, const LinearMap& m, const VectorXd& b,
                 VectorXd& x, double reduction, int max_iters) {
  const int n = static_cast<int>(b.size());
  x = VectorXd::Zero(n);
  VectorXd r1 = b;
  VectorXd y = m(r1);
  double beta1 = r1.dot(y);
  if (beta1 < 0.0) fail(ErrorCode::kNumerical, "MINRES: indefinite preconditioner");
  beta1 = std::sqrt(beta1);
  if (beta1 == 0.0) return 0;

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  VectorXd w = VectorXd::Zero(n), w2 = VectorXd::Zero(n), r2 = r1;
  const double tiny = std::numeric_limits<double>::epsilon();

  int it = 0;
  while (it < max_iters) {
    ++it;
    const VectorXd v = y / beta;
    y = a(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = m(r2);
    oldb = beta;
    beta = r2.dot(y);
    if (beta < 0.0) fail(ErrorCode::kNumerical, "MINRES: indefinite preconditioner");
    beta = std::sqrt(beta);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar *= sn;

    const VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    if (phibar <= reduction * beta1 || beta == 0.0) break;
  }
  return it;
}

// Orthogonalize t against the columns of v (twice), return its norm after.
double orthogonalize(const MatrixXd& v, VectorXd& t) {
  for (int pass = 0; pass < 2; ++pass) t -= v * (v.transpose() * t);
  return t.norm();
}

}  // namespace

KrylovResult minres(const LinearMap& a, const LinearMap& m, const VectorXd& b,
                    VectorXd& x, double tol, int max_iters) {
  require(x.size() == b.size(), "MINRES: size mismatch");
  KrylovResult out;
  VectorXd r = b - a(x);
  out.residual = r.norm();
  while (out.residual > tol && out.iterations < max_iters) {
    VectorXd dx;
    const double reduction = std::max(1e-12, 0.1 * tol / out.residual);
    const int used = minres_sweep(a, m, r, dx, reduction,
                                  max_iters - out.iterations);
    out.iterations += used;
    if (used == 0) break;
    x += dx;
    r = b - a(x);
    const double next = r.norm();
    if (!std::isfinite(next)) fail(ErrorCode::kNumerical, "MINRES: non-finite residual");
    // Stalled restart: nothing more to gain.
    if (next > 0.9 * out.residual) {
      out.residual = next;
      break;
    }
    out.residual = next;
  }
  out.converged = out.residual <= tol;
  return out;
}

EigenResult lowest_eigenpairs(const LinearMap& a, const LinearMap& m,
                              const MatrixXd& start, int nev, double tol,
                              int max_iters, int max_basis) {
  require(nev >= 1 && start.cols() >= nev, "Davidson: need at least nev start vectors");
  const int n = static_cast<int>(start.rows());
  const int keep = std::min<int>(start.cols(), std::max(2 * nev, nev + 2));
  require(max_basis > keep + nev, "Davidson: basis limit too small");

  MatrixXd v(n, 0), av(n, 0);
  auto append = [&](VectorXd t) {
    const double scale = t.norm();
    if (scale == 0.0) return false;
    t /= scale;
    if (orthogonalize(v, t) < 1e-8) return false;
    t.normalize();
    v.conservativeResize(Eigen::NoChange, v.cols() + 1);
    av.conservativeResize(Eigen::NoChange, av.cols() + 1);
    v.col(v.cols() - 1) = t;
    av.col(av.cols() - 1) = a(t);
    return true;
  };
  for (int j = 0; j < start.cols(); ++j) append(start.col(j));
  require(v.cols() >= nev, "Davidson: start vectors are linearly dependent");

  EigenResult out;
  for (int it = 0;; ++it) {
    MatrixXd h = v.transpose() * av;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    if (es.info() != Eigen::Success) fail(ErrorCode::kNumerical, "Davidson: Ritz solve failed");
    const int nk = std::min<int>(keep, static_cast<int>(v.cols()));
    const MatrixXd s = es.eigenvectors().leftCols(nk);
    MatrixXd x = v * s;
    MatrixXd ax = av * s;
    out.values = es.eigenvalues().head(nev);
    out.vectors = x.leftCols(nev);
    out.residuals.resize(nev);
    MatrixXd r(n, nev);
    for (int i = 0; i < nev; ++i) {
      r.col(i) = ax.col(i) - out.values(i) * x.col(i);
      out.residuals(i) = r.col(i).norm();
    }
    out.iterations = it;
    if (out.residuals.maxCoeff() <= tol) {
      out.converged = true;
      return out;
    }
    if (it >= max_iters) return out;

    if (v.cols() + nev > max_basis) {
      // Thick restart on the leading Ritz vectors.
      v = x;
      av = ax;
    }
    int added = 0;
    for (int i = 0; i < nev; ++i)
      if (out.residuals(i) > tol && append(m(r.col(i)))) ++added;
    if (added == 0) return out;
  }
}

}  // namespace qmlab
