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

#include "qmlab/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qmlab/error.hpp"
#include "qmlab/parallel.hpp"

namespace qmlab {
namespace {

// Sixth-order centred stencils.
constexpr double kD1[4] = {0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
constexpr double kD2[4] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};

void require_same_grid(const CylField& f, const CylField& g) {
  require(f.grid == g.grid, "cylinder fields live on different grids");
}

// Radial part d_rr + (1/r) d_r by finite differences; rows within three
// points of either edge are treated as zero.
ComplexPlane radial_operator(const CylField& f, bool guard) {
  const CylGrid& g = f.grid;
  const int n = g.n_r;
  const ComplexPlane& v = f.values;
  if (guard) {
    const double scale = v.cwiseAbs().maxCoeff();
    const double edge = std::max(v.topRows(3).cwiseAbs().maxCoeff(),
                                 v.bottomRows(3).cwiseAbs().maxCoeff());
    if (edge > 1e-12 * scale)
      fail(ErrorCode::kNumerical,
           "field does not vanish at the radial window edge");
  }
  const double dr = g.dr();
  ComplexPlane out = ComplexPlane::Zero(n, g.n_y);
  for (int i = 3; i < n - 3; ++i) {
    Eigen::RowVectorXcd d1 = Eigen::RowVectorXcd::Zero(g.n_y);
    Eigen::RowVectorXcd d2 = kD2[0] * v.row(i);
    for (int s = 1; s <= 3; ++s) {
      d1 += kD1[s] * (v.row(i + s) - v.row(i - s));
      d2 += kD2[s] * (v.row(i + s) + v.row(i - s));
    }
    out.row(i) = d2 / (dr * dr) + d1 / (dr * g.r(i));
  }
  return out;
}

ComplexPlane axial_second_derivative(const CylField& f) {
  const CylGrid& g = f.grid;
  ComplexPlane v = f.values;
  Fft fft(FftAxis::kSecond, g.n_r, g.n_y);
  fft.forward(v);
  const auto ky = wavenumbers(g.n_y, 2.0 * g.y_half);
  for (int j = 0; j < g.n_y; ++j) v.col(j) *= -ky[j] * ky[j] / fft.scale();
  fft.backward(v);
  return v;
}

CylField laplacian_impl(const CylField& f, double h, bool guard) {
  const CylGrid& g = f.grid;
  require(h > 0.0, "h must be positive");
  if (!f.values.allFinite())
    fail(ErrorCode::kNumerical, "non-finite values in cylinder field");
  ComplexPlane out = radial_operator(f, guard) + axial_second_derivative(f);
  const double k2 = static_cast<double>(g.k) * g.k;
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.r(i);
    out.row(i) -= (k2 * k2 / (h * h * r * r)) * f.values.row(i);
  }
  return {g, std::move(out)};
}

CylField residual_impl(const Quasimode& qm, bool guard) {
  const CylField& p = qm.profile;
  const CylGrid& g = p.grid;
  const double h = qm.params.h;
  const double a = qm.params.a;
  CylField lap = laplacian_impl(p, h, guard);
  ComplexPlane r = h * h * lap.values;
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i) {
      const Complex u = p.values(i, j);
      const double x2 = g.r(i) * g.r(i) + g.y(j) * g.y(j);
      r(i, j) += (h * qm.lambda - x2 - a * h * h * std::norm(u)) * u;
    }
  return {g, std::move(r)};
}

// Interpolation rows for targets in the plane box; rows outside stay zero.
Eigen::MatrixXd sampling_matrix(const std::vector<double>& targets, int n,
                                double extent) {
  const double spacing = 2.0 * extent / n;
  std::vector<double> inside;
  std::vector<int> where;
  for (size_t t = 0; t < targets.size(); ++t)
    if (targets[t] >= -extent && targets[t] <= extent - spacing) {
      inside.push_back(targets[t]);
      where.push_back(static_cast<int>(t));
    }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(targets.size(), n);
  if (inside.empty()) return m;
  const Eigen::MatrixXd part = trig_interpolation_matrix(inside, n, -extent, spacing);
  for (size_t t = 0; t < where.size(); ++t) m.row(where[t]) = part.row(t);
  return m;
}

double weighted_sum(const CylField& f, bool with_x) {
  const CylGrid& g = f.grid;
  double s = 0.0;
  for (int j = 0; j < g.n_y; ++j)
    for (int i = 0; i < g.n_r; ++i) {
      const double r = g.r(i), y = g.y(j);
      double w = r;
      if (with_x) {
        const double q = r * r + y * y + 1.0;
        w *= q * q;
      }
      s += w * std::norm(f.values(i, j));
    }
  return 2.0 * std::numbers::pi * s * g.dr() * g.dy();
}

}  // namespace

void CylGrid::validate() const {
  require(r_min > 0.0 && r_max > r_min, "cylinder window needs 0 < r_min < r_max");
  require(n_r >= 16 && n_y >= 8 && n_y % 2 == 0,
          "cylinder grid needs n_r >= 16 and even n_y >= 8");
  require(y_half > 0.0, "cylinder half-height must be positive");
  require(k >= 1, "angular index k must be positive");
}

CylGrid default_cyl_grid(const ProblemParams& params, const PlaneGrid& plane,
                         int n_r) {
  CylGrid g;
  g.k = params.k;
  g.r_min = 0.45 * params.k;
  g.r_max = 1.55 * params.k;
  g.n_r = n_r;
  g.y_half = plane.extent_sigma * std::sqrt(params.h);
  g.n_y = plane.n_sigma;
  return g;
}

void CutoffSpec::validate() const {
  require(0.0 < support_lo && support_lo < plateau_lo && plateau_lo <= 1.0 &&
              1.0 <= plateau_hi && plateau_hi < support_hi,
          "cutoff needs support_lo < plateau_lo <= 1 <= plateau_hi < support_hi");
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double CutoffSpec::operator()(double x) const {
  if (x <= support_lo || x >= support_hi) return 0.0;
  if (x < plateau_lo) return smooth_step((x - support_lo) / (plateau_lo - support_lo));
  if (x > plateau_hi) return smooth_step((support_hi - x) / (support_hi - plateau_hi));
  return 1.0;
}

double quasimode_lambda(double h, int k, double E0, double E1, double E2,
                        int levels) {
  const double kk = static_cast<double>(k) * k;
  double lambda = 2.0 * kk / h + E0;
  if (levels >= 1) lambda += std::sqrt(h) * E1;
  if (levels >= 2) lambda += h * E2;
  return lambda;
}

std::array<double, 5> radial_taylor_coefficients(int k) {
  const double kd = k;
  return {2.0 * kd * kd, 0.0, 4.0, -4.0 / kd, 5.0 / (kd * kd)};
}

double cylinder_potential(double r, double y, int k) {
  const double k2 = static_cast<double>(k) * k;
  return k2 * k2 / (r * r) + r * r + y * y;
}

Quasimode build_quasimode(const CascadeSolution& cascade,
                          const ProblemParams& params, const CylGrid& grid,
                          const BuildOptions& options,
                          const CutoffSpec& cutoff) {
  params.validate();
  grid.validate();
  cutoff.validate();
  require(options.levels >= 0 && options.levels <= 2, "levels must be 0, 1 or 2");
  require(grid.k == params.k && cascade.k == params.k,
          "angular index differs between cascade, grid and parameters");
  require(std::abs(cascade.ground.a_kappa_sq - params.a_kappa_sq()) <=
              1e-14 * std::max(1.0, std::abs(params.a_kappa_sq())),
          "cascade was solved for a different a kappa^2");
  const double k = params.k;
  if (options.cutoff && (grid.r_min > cutoff.support_lo * k ||
                         grid.r_max < cutoff.support_hi * k)) {
    std::ostringstream os;
    os << "cutoff support [" << cutoff.support_lo * k << ", "
       << cutoff.support_hi * k << "] exceeds the cylinder window";
    fail(ErrorCode::kInvalidArgument, os.str());
  }

  Quasimode qm;
  qm.params = params;
  qm.cascade = cascade;
  qm.cutoff = cutoff;
  qm.options = options;
  const double h = params.h;
  const long inv_h = params.inverse_h();
  qm.angular_number = static_cast<long>(params.k) * params.k * inv_h;
  const auto& gs = cascade.ground;
  qm.lambda = quasimode_lambda(h, params.k, gs.E0, cascade.E1, cascade.E2,
                               options.levels);

  const PlaneGrid& pg = gs.v0.grid();
  const double sh = std::sqrt(h);
  RealPlane v = gs.v0.real();
  if (options.levels >= 1) v += sh * cascade.v1.real();
  if (options.levels >= 2) v += h * cascade.v2.real();

  std::vector<double> rho(grid.n_r), sigma(grid.n_y), chi(grid.n_r, 1.0);
  for (int i = 0; i < grid.n_r; ++i) {
    rho[i] = (grid.r(i) - k) / sh;
    if (options.cutoff) chi[i] = cutoff(grid.r(i) / k);
  }
  for (int j = 0; j < grid.n_y; ++j) sigma[j] = grid.y(j) / sh;

  // Samples beyond the plane box are dropped; they must be negligible.
  auto leaves_box = [](const std::vector<double>& t, double extent) {
    for (double x : t)
      if (x < -extent || x > extent) return true;
    return false;
  };
  std::vector<double> rho_used;
  for (int i = 0; i < grid.n_r; ++i)
    if (chi[i] > 0.0) rho_used.push_back(rho[i]);
  if (leaves_box(rho_used, pg.extent_rho) || leaves_box(sigma, pg.extent_sigma)) {
    const double scale = v.cwiseAbs().maxCoeff();
    const double edge = std::max({v.row(0).cwiseAbs().maxCoeff(),
                                  v.col(0).cwiseAbs().maxCoeff()});
    if (edge > 1e-10 * scale)
      fail(ErrorCode::kInvalidArgument,
           "interpolation out of range: profile not negligible at the plane box edge");
  }

  const Eigen::MatrixXd mr = sampling_matrix(rho, pg.n_rho, pg.extent_rho);
  const Eigen::MatrixXd ms = sampling_matrix(sigma, pg.n_sigma, pg.extent_sigma);
  Eigen::MatrixXd sampled = mr * v * ms.transpose();
  const double amp = params.kappa / sh;
  for (int i = 0; i < grid.n_r; ++i) sampled.row(i) *= amp * chi[i];
  qm.profile = {grid, sampled.cast<Complex>()};
  return qm;
}

CylField cylinder_laplacian(const CylField& f, double h) {
  return laplacian_impl(f, h, true);
}

CylField compute_residual(const Quasimode& qm) { return residual_impl(qm, true); }

double cyl_norm(const CylField& f) { return std::sqrt(weighted_sum(f, false)); }

double cyl_weighted_norm(const CylField& f) {
  return std::sqrt(weighted_sum(f, true));
}

Complex cyl_inner(const CylField& f, const CylField& g) {
  require_same_grid(f, g);
  const CylGrid& c = f.grid;
  Complex s = 0.0;
  for (int j = 0; j < c.n_y; ++j)
    for (int i = 0; i < c.n_r; ++i)
      s += c.r(i) * std::conj(f.values(i, j)) * g.values(i, j);
  return 2.0 * std::numbers::pi * s * c.dr() * c.dy();
}

ResidualReport residual_scaling_study(const CascadeSolution& cascade,
                                      const ProblemParams& base,
                                      const std::vector<double>& h_list,
                                      int n_r, const BuildOptions& options) {
  require(h_list.size() >= 3, "residual scaling needs at least three h values");
  const PlaneGrid& plane = cascade.ground.v0.grid();
  const size_t n = h_list.size();
  ResidualReport rep;
  rep.h_values = h_list;
  rep.weighted_norms.assign(n, 0.0);
  rep.laplacian_norms.assign(n, 0.0);
  rep.tail_norms.assign(n, 0.0);
  rep.profile_norms.assign(n, 0.0);

  parallel_for(static_cast<int>(n), [&](int i) {
    ProblemParams p = base;
    p.h = h_list[i];
    const CylGrid grid = default_cyl_grid(p, plane, n_r);
    const Quasimode qm = build_quasimode(cascade, p, grid, options);
    const CylField r = compute_residual(qm);
    rep.weighted_norms[i] = cyl_weighted_norm(r);
    rep.laplacian_norms[i] = cyl_norm(cylinder_laplacian(r, p.h));
    rep.profile_norms[i] =
        cyl_norm(qm.profile) / std::sqrt(2.0 * std::numbers::pi * p.k);

    if (options.cutoff) {
      BuildOptions uncut = options;
      uncut.cutoff = false;
      const CylField ru = residual_impl(build_quasimode(cascade, p, grid, uncut), false);
      ComplexPlane tail = r.values;
      for (int row = 0; row < grid.n_r; ++row)
        tail.row(row) -= qm.cutoff(grid.r(row) / p.k) * ru.values.row(row);
      rep.tail_norms[i] = cyl_norm({grid, std::move(tail)});
    }
  });

  rep.weighted_fit = fit_loglog(rep.h_values, rep.weighted_norms);
  rep.laplacian_fit = fit_loglog(rep.h_values, rep.laplacian_norms);
  rep.fitted_slopes = {rep.weighted_fit.slope, rep.laplacian_fit.slope};
  return rep;
}

ResidualReport residual_scaling_study(const ProblemParams& base,
                                      const std::vector<double>& h_list,
                                      const PlaneGrid& plane, int n_r,
                                      const BuildOptions& options) {
  base.validate();
  const CascadeSolution cascade = solve_cascade(base, plane);
  return residual_scaling_study(cascade, base, h_list, n_r, options);
}

}  // namespace qmlab
