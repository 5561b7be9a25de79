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

#include "qmlab/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qmlab/error.hpp"

namespace qmlab {
namespace {

double quartic_integral(const PlaneGrid& g, const RealPlane& v) {
  return v.array().square().square().sum() * g.cell();
}

double functional_j(const PlaneGrid& g, const RealPlane& v, double b) {
  return inner(g, apply_p0(g, v), v) + 0.5 * b * quartic_integral(g, v);
}

double gradient_sq(const PlaneGrid& g, const RealPlane& v) {
  return -inner(g, laplacian(g, v), v);
}

}  // namespace

double evaluate_j(const PlaneField& u, double a_kappa_sq) {
  const double n = norm_l2(u);
  require(std::abs(n - 1.0) <= 1e-6, "evaluate_j expects a unit-norm field");
  const double quad = inner(apply_p0(u), u).real();
  const double l4 = norm_l4(u);
  return quad + 0.5 * a_kappa_sq * std::pow(l4, 4);
}

PlaneField j_gradient(const PlaneField& u, double a_kappa_sq) {
  const ComplexPlane cubic =
      (u.values().cwiseAbs2().array() * u.values().array()).matrix();
  return PlaneField(u.grid(),
                    2.0 * (apply_p0(u).values() + a_kappa_sq * cubic));
}

double multiplier_e0(const PlaneGrid& g, const RealPlane& v, double b) {
  return inner(g, apply_p0(g, v), v) + b * quartic_integral(g, v);
}

double euler_lagrange_residual(const PlaneGrid& g, const RealPlane& v,
                               double b, double e0) {
  const RealPlane r =
      apply_p0(g, v) + b * RealPlane(v.array().cube().matrix()) - e0 * v;
  return norm_l2(g, r);
}

GroundState solve_ground_state(const ProblemParams& params,
                               const PlaneGrid& grid,
                               const GroundStateOptions& options) {
  return solve_ground_state(params, OscillatorBasis(grid), options);
}

GroundState solve_ground_state(const ProblemParams& params,
                               const OscillatorBasis& basis,
                               const GroundStateOptions& options) {
  const double b = params.a_kappa_sq();
  require(params.c0 > 0.0, "smallness constant c0 must be positive");
  if (std::abs(b) > params.c0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "|a| kappa^2 = " << std::abs(b) << " exceeds c0 = " << params.c0;
    fail(ErrorCode::kInvalidArgument, os.str());
  }
  require(options.tau > 0.0 && options.tol > 0.0,
          "gradient flow needs positive tau and tolerance");

  const PlaneGrid& g = basis.grid();
  RealPlane u;
  if (options.initial_guess) {
    require(options.initial_guess->grid() == g,
            "initial guess lives on a different grid");
    u = options.initial_guess->real();
  } else {
    u = harmonic_ground_state(g).real();
  }
  const double n0 = norm_l2(g, u);
  require(n0 > 0.0, "initial guess must be nonzero");
  u /= n0;

  GroundState out{.v0 = PlaneField(g), .energy_history = {}};
  out.a_kappa_sq = b;
  double tau = options.tau;
  double j = functional_j(g, u, b);
  out.energy_history.push_back(j);

  for (int it = 0;; ++it) {
    const double e0 = multiplier_e0(g, u, b);
    const double res = euler_lagrange_residual(g, u, b, e0);
    if (res <= options.tol) {
      out.v0 = PlaneField::from_real(g, u);
      out.E0 = e0;
      out.j_value = j;
      out.iterations = it;
      out.residual = res;
      return out;
    }
    if (it >= options.max_iters) {
      std::ostringstream os;
      os << "ground state flow did not converge in " << it
         << " iterations; last residual " << res;
      fail(ErrorCode::kNotConverged, os.str());
    }

    // Backtrack on tau until J does not increase.
    for (;;) {
      // The multiplier term keeps the fixed point on the exact
      // Euler-Lagrange equation for every tau.
      const RealPlane rhs = (1.0 + tau * e0) * u -
                            tau * b * RealPlane(u.array().cube().matrix());
      RealPlane next = basis.apply_function(
          rhs, [tau](double lam) { return 1.0 / (1.0 + tau * lam); });
      next /= norm_l2(g, next);
      const double j_next = functional_j(g, next, b);
      if (!std::isfinite(j_next))
        fail(ErrorCode::kNumerical, "ground state flow produced non-finite J");
      if (j_next <= j + 1e-12) {
        u = std::move(next);
        j = j_next;
        break;
      }
      tau *= 0.5;
      if (tau < options.min_tau) {
        std::ostringstream os;
        os << "energy increase " << (j_next - j) << " at iteration " << it
           << " persists down to tau = " << tau;
        fail(ErrorCode::kNotConverged, os.str());
      }
    }
    out.energy_history.push_back(j);

    // The minimization is only well posed while the quartic term is
    // dominated by the kinetic one.
    if (0.5 * b * quartic_integral(g, u) < -0.5 * gradient_sq(g, u))
      fail(ErrorCode::kNumerical, "coercivity lost: |a| kappa^2 too large");
  }
}

DecayFit fit_decay(const PlaneField& f) {
  const auto& g = f.grid();
  // Upper envelope: the largest log|f| in each bin of s = |rho| + |sigma|.
  const double width = std::max(g.d_rho(), g.d_sigma());
  std::map<long, double> envelope;
  for (int j = 0; j < g.n_sigma; ++j) {
    for (int i = 0; i < g.n_rho; ++i) {
      const double m = std::abs(f.values()(i, j));
      if (!(m > 1e-10 && m < 1e-2)) continue;
      const long bin = std::lround((std::abs(g.rho(i)) + std::abs(g.sigma(j))) / width);
      const double y = std::log(m);
      auto [it, fresh] = envelope.emplace(bin, y);
      if (!fresh) it->second = std::max(it->second, y);
    }
  }
  const int n = static_cast<int>(envelope.size());
  if (n < 3) fail(ErrorCode::kInvalidArgument, "decay fit: empty annulus");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [bin, y] : envelope) {
    const double x = -bin * width;
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx <= 0.0) fail(ErrorCode::kInvalidArgument, "decay fit: degenerate annulus");
  DecayFit fit;
  fit.rate = cxy / vx;
  fit.prefactor = std::exp((sy - fit.rate * sx) / n);
  fit.r2 = (vy > 0.0) ? cxy * cxy / (vx * vy) : 1.0;
  fit.samples = n;
  return fit;
}

}  // namespace qmlab
