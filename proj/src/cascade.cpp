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

#include "qmlab/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qmlab/error.hpp"
#include "qmlab/krylov.hpp"

namespace qmlab {
namespace {

using Eigen::VectorXd;

VectorXd flat(const RealPlane& f) {
  return Eigen::Map<const VectorXd>(f.data(), f.size());
}

RealPlane unflat(const PlaneGrid& g, const VectorXd& v) {
  return Eigen::Map<const RealPlane>(v.data(), g.n_rho, g.n_sigma);
}

void check_coupling(const GroundState& ground, double b) {
  if (std::abs(b - ground.a_kappa_sq) > 1e-14 * std::max(1.0, std::abs(b))) {
    std::ostringstream os;
    os << "coupling " << b << " differs from the ground state's "
       << ground.a_kappa_sq;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
}

// The linearized operator and its preconditioner on flat vectors.
struct Linearized {
  PlaneGrid g;
  RealPlane potential;  // 4 rho^2 + sigma^2 + 3 b v0^2 - E0
  OscillatorBasis basis;
  double shift;  // preconditioner (P0 - shift)^{-1} is SPD

  Linearized(const GroundState& ground)
      : g(ground.v0.grid()), basis(g) {
    const RealPlane v0 = ground.v0.real();
    potential = p0_potential(g) +
                RealPlane((3.0 * ground.a_kappa_sq * v0.array().square()).matrix());
    potential.array() -= ground.E0;
    shift = std::min(ground.E0, 3.0) - 1.0;
  }

  RealPlane apply(const RealPlane& f) const {
    return -laplacian(g, f) + RealPlane(potential.cwiseProduct(f));
  }
  VectorXd apply(const VectorXd& x) const { return flat(apply(unflat(g, x))); }
  VectorXd precondition(const VectorXd& x) const {
    const double s = shift;
    return flat(basis.apply_function(unflat(g, x),
                                     [s](double lam) { return 1.0 / (lam - s); }));
  }
};

// Deterministic smooth start vector with no particular parity.
RealPlane mixed_parity_seed(const PlaneGrid& g) {
  std::mt19937 rng(20260415u);
  std::normal_distribution<double> n01(0.0, 1.0);
  double c[4][4];
  for (auto& row : c)
    for (double& x : row) x = n01(rng);
  RealPlane f(g.n_rho, g.n_sigma);
  for (int j = 0; j < g.n_sigma; ++j)
    for (int i = 0; i < g.n_rho; ++i) {
      const double r = g.rho(i), s = g.sigma(j);
      double p = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; a + b < 4; ++b) p += c[a][b] * std::pow(r, a) * std::pow(s, b);
      f(i, j) = p * std::exp(-(r * r + 0.5 * s * s));
    }
  return f;
}

bool use_projection(const SpectralGapReport& gap) {
  if (std::abs(gap.mu1) < gap.delta) {
    std::ostringstream os;
    os << "spectral gap too small: mu0 = " << gap.mu0 << ", mu1 = " << gap.mu1;
    fail(ErrorCode::kNumerical, os.str());
  }
  return std::abs(gap.mu0) < gap.delta;
}

LevelSolution solve_level(const GroundState& ground, const RealPlane& source,
                          const CascadeOptions& options,
                          const SpectralGapReport& gap) {
  const PlaneGrid& g = ground.v0.grid();
  const RealPlane v0 = ground.v0.real();
  LevelSolution out;
  // <E v0 + source, v0> = 0 with |v0| = 1.
  out.E = -inner(g, source, v0);
  const RealPlane f = out.E * v0 + source;
  out.solvability = inner(g, f, v0);
  out.projected = use_projection(gap);

  const Linearized op(ground);
  const VectorXd fv = flat(f), v0v = flat(v0);
  const double cell = g.cell();
  auto project = [&](VectorXd x) {
    x -= (v0v.dot(x) * cell) * v0v;
    return x;
  };
  LinearMap a, m;
  if (out.projected) {
    a = [&](const VectorXd& x) { return project(op.apply(project(x))); };
    m = [&](const VectorXd& x) { return project(op.precondition(project(x))); };
  } else {
    a = [&](const VectorXd& x) { return op.apply(x); };
    m = [&](const VectorXd& x) { return op.precondition(x); };
  }
  const VectorXd b = out.projected ? project(fv) : fv;
  VectorXd x = VectorXd::Zero(b.size());
  // Euclidean tolerance equivalent to tol in L^2.
  const double tol = options.tol / std::sqrt(cell);
  const KrylovResult kr = minres(a, m, b, x, 0.5 * tol, options.max_iters);
  if (out.projected) x = project(x);

  const RealPlane v = unflat(g, x);
  out.residual = norm_l2(g, RealPlane(op.apply(v) - f));
  out.iterations = kr.iterations;
  if (!(out.residual <= options.tol)) {
    std::ostringstream os;
    os << "cascade linear solve stagnated after " << kr.iterations
       << " iterations; residual " << out.residual;
    fail(ErrorCode::kNotConverged, os.str());
  }
  out.v = PlaneField::from_real(g, v);
  out.rhs = PlaneField::from_real(g, f);
  return out;
}

}  // namespace

PlaneField apply_linearized(const PlaneField& f, const GroundState& ground,
                            double a_kappa_sq) {
  check_coupling(ground, a_kappa_sq);
  require(f.grid() == ground.v0.grid(), "field and ground state grids differ");
  const ComplexPlane w =
      (3.0 * a_kappa_sq * ground.v0.values().cwiseAbs2().array() - ground.E0)
          .matrix()
          .cast<Complex>();
  return apply_p0(f) + PlaneField(f.grid(), w.cwiseProduct(f.values()));
}

SpectralGapReport spectral_gap(const GroundState& ground, double a_kappa_sq,
                               const CascadeOptions& options) {
  check_coupling(ground, a_kappa_sq);
  const PlaneGrid& g = ground.v0.grid();
  const Linearized op(ground);
  const RealPlane v0 = ground.v0.real();
  const RealPlane r = rho_power(g, 1);
  RealPlane s(g.n_rho, g.n_sigma);
  for (int j = 0; j < g.n_sigma; ++j) s.col(j).setConstant(g.sigma(j));

  Eigen::MatrixXd start(v0.size(), 5);
  start.col(0) = flat(v0);
  start.col(1) = flat(s.cwiseProduct(v0));
  start.col(2) = flat(r.cwiseProduct(v0));
  start.col(3) = flat(RealPlane(r.cwiseProduct(s).cwiseProduct(v0)));
  start.col(4) = flat(mixed_parity_seed(g));

  const double to_euclid = 1.0 / std::sqrt(g.cell());
  const EigenResult er = lowest_eigenpairs(
      [&](const VectorXd& x) { return op.apply(x); },
      [&](const VectorXd& x) { return op.precondition(x); }, start, 2,
      options.eig_tol * to_euclid, options.max_iters);
  if (!er.converged) {
    std::ostringstream os;
    os << "eigensolver stagnated after " << er.iterations
       << " iterations; residuals " << er.residuals(0) / to_euclid << ", "
       << er.residuals(1) / to_euclid;
    fail(ErrorCode::kNotConverged, os.str());
  }
  SpectralGapReport rep;
  rep.mu0 = er.values(0);
  rep.mu1 = er.values(1);
  RealPlane w0 = unflat(g, er.vectors.col(0));
  w0 /= norm_l2(g, w0);
  // Sign convention: positive overlap with v0.
  if (inner(g, w0, v0) < 0.0) w0 = -w0;
  rep.w0 = PlaneField::from_real(g, w0);
  rep.delta = options.gap_delta;
  rep.gap_ok = std::abs(rep.mu0) >= rep.delta && std::abs(rep.mu1) >= rep.delta;
  rep.residuals = {er.residuals(0) / to_euclid, er.residuals(1) / to_euclid};
  rep.iterations = er.iterations;
  return rep;
}

PlaneField level1_source(const GroundState& ground, int k) {
  require(k >= 1, "angular index k must be positive");
  const PlaneGrid& g = ground.v0.grid();
  const RealPlane v0 = ground.v0.real();
  const RealPlane src =
      (d_rho(g, v0) + 4.0 * RealPlane(rho_power(g, 3).cwiseProduct(v0))) / k;
  return PlaneField::from_real(g, src);
}

PlaneField level2_source(const GroundState& ground, const PlaneField& v1,
                         double E1, int k) {
  require(k >= 1, "angular index k must be positive");
  const PlaneGrid& g = ground.v0.grid();
  require(v1.grid() == g, "v1 lives on a different grid");
  const RealPlane v0 = ground.v0.real();
  const RealPlane w = v1.real();
  const double b = ground.a_kappa_sq;
  const double kk = static_cast<double>(k) * k;
  RealPlane src = E1 * w;
  src -= 3.0 * b * RealPlane(v0.cwiseProduct(w).cwiseProduct(w));
  src += (d_rho(g, w) + 4.0 * RealPlane(rho_power(g, 3).cwiseProduct(w))) / k;
  src -= RealPlane(rho_power(g, 1).cwiseProduct(d_rho(g, v0))) / kk;
  src -= 5.0 * RealPlane(rho_power(g, 4).cwiseProduct(v0)) / kk;
  return PlaneField::from_real(g, src);
}

LevelSolution solve_level1(const GroundState& ground,
                           const ProblemParams& params,
                           const CascadeOptions& options,
                           const std::optional<SpectralGapReport>& gap) {
  check_coupling(ground, params.a_kappa_sq());
  const SpectralGapReport rep =
      gap ? *gap : spectral_gap(ground, params.a_kappa_sq(), options);
  return solve_level(ground, level1_source(ground, params.k).real(), options, rep);
}

LevelSolution solve_level2(const GroundState& ground, const PlaneField& v1,
                           double E1, const ProblemParams& params,
                           const CascadeOptions& options,
                           const std::optional<SpectralGapReport>& gap) {
  check_coupling(ground, params.a_kappa_sq());
  const SpectralGapReport rep =
      gap ? *gap : spectral_gap(ground, params.a_kappa_sq(), options);
  return solve_level(ground, level2_source(ground, v1, E1, params.k).real(),
                     options, rep);
}

CascadeSolution solve_cascade(const GroundState& ground,
                              const ProblemParams& params,
                              const CascadeOptions& options) {
  CascadeSolution out;
  out.ground = ground;
  out.k = params.k;
  out.gap = spectral_gap(ground, params.a_kappa_sq(), options);
  const LevelSolution l1 = solve_level1(ground, params, options, out.gap);
  const LevelSolution l2 = solve_level2(ground, l1.v, l1.E, params, options, out.gap);
  out.v1 = l1.v;
  out.E1 = l1.E;
  out.v2 = l2.v;
  out.E2 = l2.E;
  out.linear_residuals = {l1.residual, l2.residual};
  out.iterations = {l1.iterations, l2.iterations};
  return out;
}

CascadeSolution solve_cascade(const ProblemParams& params,
                              const PlaneGrid& grid,
                              const CascadeOptions& options,
                              const GroundStateOptions& gs_options) {
  params.validate();
  return solve_cascade(solve_ground_state(params, grid, gs_options), params,
                       options);
}

}  // namespace qmlab
