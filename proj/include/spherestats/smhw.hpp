#pragma once

#include <memory>
#include <vector>

#include "spherestats/grid.hpp"
#include "spherestats/stats.hpp"

// Spherical Mexican Hat Wavelet: axisymmetric kernel on a grid, harmonic
// transform to wavelet coefficient maps, and moment statistics.
namespace spherestats {

struct SmhwKernel {
  double R = 0.0;
  std::shared_ptr<const SphereGrid> grid;
  std::vector<double> profile;         // Psi(theta_i; R), one value per colatitude
  std::vector<double> legendre_coeffs; // psi_l = cubature of Psi conj(Y_l0), 0..grid->lmax
  double normalization = 1.0;          // N(R) fixing unit L2 norm pre-compensation
  double monopole_shift = 0.0;         // residual discretized monopole, subtracted
};

// Psi(theta) ~ [1 + (x/2)^2]^2 [2 - (x/R)^2] exp(-x^2 / (2 R^2)) with
// x = 2 tan(theta/2). Normalized to unit L2 norm on the grid, then the
// residual discretized monopole is subtracted so the cubature of Psi is 0.
SmhwKernel smhw_kernel(double R, std::shared_ptr<const SphereGrid> grid);

// evaluate the analytic profile (normalized, monopole-subtracted) at theta
double smhw_profile(const SmhwKernel& kernel, double theta);

// w map by axisymmetric convolution: w_lm = a_lm sqrt(4pi/(2l+1)) psi_l
SphereMap smhw_transform(const Alm& alm, const SmhwKernel& kernel);

// direct definition at one center: cubature of T(x) Psi(angle to center)
double smhw_coefficient_direct(const Alm& alm, const SmhwKernel& kernel, double theta0,
                               double phi0);

std::vector<double> default_smhw_scales();  // {0.05, 0.1, 0.2, 0.4, 0.8} rad

// area-weighted skewness and excess kurtosis over observed pixels
stats::Moments smhw_moments(const SphereMap& coeff_map);

}  // namespace spherestats
