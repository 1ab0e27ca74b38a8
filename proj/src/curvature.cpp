#include "spherestats/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

FieldDerivs field_derivatives(const Alm& alm, double theta, double phi) {
  if (theta < kPolarCutoff || theta > kPi - kPolarCutoff)
    throw std::invalid_argument("field_derivatives: colatitude too close to a pole");
  cdouble t(0.0, 0.0), dt(0.0, 0.0), dp(0.0, 0.0), dtt(0.0, 0.0), dtp(0.0, 0.0), dpp(0.0, 0.0);
  for (int l = 0; l <= alm.lmax; ++l)
    for (int m = -l; m <= l; ++m) {
      const cdouble a = alm.get(l, m);
      if (a == cdouble(0.0, 0.0)) continue;
      const YlmDerivs d = ylm_derivatives(l, m, theta, phi);
      t += a * ylm(l, m, theta, phi);
      dt += a * d.d_theta;
      dp += a * d.d_phi;
      dtt += a * d.d_theta_theta;
      dtp += a * d.d_theta_phi;
      dpp += a * d.d_phi_phi;
    }
  const double scale = std::max({1.0, std::abs(t), std::abs(dtt), std::abs(dpp)});
  const double resid = std::max({std::abs(t.imag()), std::abs(dt.imag()), std::abs(dp.imag()),
                                 std::abs(dtt.imag()), std::abs(dtp.imag()), std::abs(dpp.imag())});
  if (resid > 1e-10 * scale)
    throw std::runtime_error("field_derivatives: non-real field (reality condition violated)");
  return FieldDerivs{t.real(), dt.real(), dp.real(), dtt.real(), dtp.real(), dpp.real()};
}

CovariantHessian covariant_hessian(const FieldDerivs& d, double theta, double phi) {
  const double s = std::sin(theta);
  if (s < std::sin(kPolarCutoff))
    throw std::invalid_argument("covariant_hessian: colatitude too close to a pole");
  const double c = std::cos(theta);
  CovariantHessian h;
  h.theta = theta;
  h.phi = phi;
  h.h_tt = d.d_theta_theta;
  h.h_tp = (d.d_theta_phi - (c / s) * d.d_phi) / s;
  h.h_pp = (d.d_phi_phi + s * c * d.d_theta) / (s * s);
  const double tr = 0.5 * (h.h_tt + h.h_pp);
  const double disc = std::sqrt(0.25 * (h.h_tt - h.h_pp) * (h.h_tt - h.h_pp) + h.h_tp * h.h_tp);
  h.eig1 = tr + disc;
  h.eig2 = tr - disc;
  return h;
}

CurvatureClass classify_point(const CovariantHessian& h, double tau) {
  if (h.eig2 > tau) return CurvatureClass::Hill;
  if (h.eig1 < -tau) return CurvatureClass::Lake;
  if (h.eig1 > tau && h.eig2 < -tau) return CurvatureClass::Saddle;
  return CurvatureClass::Degenerate;
}

std::vector<double> default_nu_grid() {
  std::vector<double> nu;
  for (int i = -6; i <= 6; ++i) nu.push_back(0.5 * i);
  return nu;
}

DensityCurve curvature_densities(const Alm& alm, const SphereMap& map,
                                 const std::vector<double>& nu_grid, double tau) {
  for (std::size_t i = 1; i < nu_grid.size(); ++i)
    if (nu_grid[i] < nu_grid[i - 1])
      throw std::invalid_argument("curvature_densities: thresholds must be sorted");
  const SphereGrid& grid = *map.grid;

  // sample mean and sigma over usable pixels, area-weighted
  double wsum = 0.0, mean = 0.0;
  for (int i = 0; i < grid.ntheta(); ++i) {
    if (grid.thetas[i] < kPolarCutoff || grid.thetas[i] > kPi - kPolarCutoff) continue;
    const double w = grid.pixel_weight(i);
    for (int j = 0; j < grid.nphi; ++j) {
      if (!map.observed[grid.pix(i, j)]) continue;
      wsum += w;
      mean += w * map.values[grid.pix(i, j)];
    }
  }
  if (wsum == 0.0) throw std::invalid_argument("curvature_densities: no usable pixels");
  mean /= wsum;
  double var = 0.0;
  for (int i = 0; i < grid.ntheta(); ++i) {
    if (grid.thetas[i] < kPolarCutoff || grid.thetas[i] > kPi - kPolarCutoff) continue;
    const double w = grid.pixel_weight(i);
    for (int j = 0; j < grid.nphi; ++j) {
      if (!map.observed[grid.pix(i, j)]) continue;
      const double d = map.values[grid.pix(i, j)] - mean;
      var += w * d * d;
    }
  }
  const double sigma = std::sqrt(var / wsum);

  // classify every usable pixel once
  std::vector<double> value;
  std::vector<CurvatureClass> cls;
  for (int i = 0; i < grid.ntheta(); ++i) {
    const double theta = grid.thetas[i];
    if (theta < kPolarCutoff || theta > kPi - kPolarCutoff) continue;
    for (int j = 0; j < grid.nphi; ++j) {
      if (!map.observed[grid.pix(i, j)]) continue;
      const FieldDerivs d = field_derivatives(alm, theta, grid.phi(j));
      cls.push_back(classify_point(covariant_hessian(d, theta, grid.phi(j)), tau));
      value.push_back(map.values[grid.pix(i, j)] - mean);
    }
  }

  DensityCurve curve;
  curve.nu = nu_grid;
  const std::size_t n = nu_grid.size();
  curve.h.assign(n, 0.0);
  curve.l.assign(n, 0.0);
  curve.saddle.assign(n, 0.0);
  curve.degenerate.assign(n, 0.0);
  curve.defined.assign(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    const double cut = (sigma > 0.0) ? nu_grid[q] * sigma : nu_grid[q];
    std::size_t tot = 0, nh = 0, nl = 0, ns = 0, nd = 0;
    for (std::size_t k = 0; k < value.size(); ++k) {
      if (value[k] < cut) continue;
      ++tot;
      switch (cls[k]) {
        case CurvatureClass::Hill: ++nh; break;
        case CurvatureClass::Lake: ++nl; break;
        case CurvatureClass::Saddle: ++ns; break;
        case CurvatureClass::Degenerate: ++nd; break;
      }
    }
    if (tot == 0) continue;
    curve.defined[q] = 1;
    curve.h[q] = static_cast<double>(nh) / tot;
    curve.l[q] = static_cast<double>(nl) / tot;
    curve.saddle[q] = static_cast<double>(ns) / tot;
    curve.degenerate[q] = static_cast<double>(nd) / tot;
  }
  return curve;
}

DensityCurve normalized_densities(const DensityCurve& curve, const DensityCurve& baseline) {
  if (curve.nu != baseline.nu)
    throw std::invalid_argument("normalized_densities: threshold grids differ");
  DensityCurve out = curve;
  out.h_norm.assign(curve.nu.size(), 0.0);
  out.l_norm.assign(curve.nu.size(), 0.0);
  for (std::size_t q = 0; q < curve.nu.size(); ++q) {
    if (!curve.defined[q] || !baseline.defined[q]) continue;
    if (baseline.h[q] == 0.0 || baseline.l[q] == 0.0)
      throw std::invalid_argument("normalized_densities: zero baseline density");
    out.h_norm[q] = curve.h[q] / baseline.h[q];
    out.l_norm[q] = curve.l[q] / baseline.l[q];
  }
  return out;
}

}  // namespace spherestats
