#pragma once

#include <vector>

#include "spherestats/grid.hpp"

// Local curvature classification through the covariant Hessian on the sphere
// and threshold-dependent hill/lake densities.
namespace spherestats {

struct FieldDerivs {
  double t = 0.0;
  double d_theta = 0.0;
  double d_phi = 0.0;
  double d_theta_theta = 0.0;
  double d_theta_phi = 0.0;
  double d_phi_phi = 0.0;
};

struct CovariantHessian {
  double theta = 0.0;
  double phi = 0.0;
  // orthonormal-frame components after Christoffel correction
  double h_tt = 0.0;
  double h_tp = 0.0;
  double h_pp = 0.0;
  double eig1 = 0.0;  // eig1 >= eig2
  double eig2 = 0.0;
};

enum class CurvatureClass { Hill, Lake, Saddle, Degenerate };

// partial derivatives of T at (theta, phi); theta kept away from the poles
FieldDerivs field_derivatives(const Alm& alm, double theta, double phi);

// H_tt = T_tt; H_tp = (T_tp - cot(theta) T_p)/sin(theta);
// H_pp = (T_pp + sin(theta)cos(theta) T_t)/sin^2(theta)
CovariantHessian covariant_hessian(const FieldDerivs& d, double theta, double phi = 0.0);

// hill: both eigenvalues > tau; lake: both < -tau; saddle: eig1 > tau and
// eig2 < -tau; anything within tau of zero is degenerate
CurvatureClass classify_point(const CovariantHessian& h, double tau);

struct DensityCurve {
  std::vector<double> nu;      // thresholds in units of the sample sigma
  std::vector<double> h;       // hill fraction of the excursion set
  std::vector<double> l;       // lake fraction
  std::vector<double> saddle;
  std::vector<double> degenerate;
  std::vector<std::uint8_t> defined;  // 0 where the excursion set is empty
  std::vector<double> h_norm;  // after normalized_densities
  std::vector<double> l_norm;
};

std::vector<double> default_nu_grid();  // -3.0 .. 3.0 step 0.5

// Per-threshold fractions over the excursion set {T >= nu * sigma} of
// observed, non-polar pixels; the map is mean-subtracted first and sigma is
// the sample standard deviation.
DensityCurve curvature_densities(const Alm& alm, const SphereMap& map,
                                 const std::vector<double>& nu_grid, double tau);

// h' = h / baseline.h, l' = l / baseline.l at matching thresholds
DensityCurve normalized_densities(const DensityCurve& curve, const DensityCurve& baseline);

}  // namespace spherestats
