#pragma once

#include <memory>
#include <vector>

#include "spherestats/field_sim.hpp"
#include "spherestats/grid.hpp"

// Needlet frame: band-pass windows b(l/B^j) built from a smooth bump, per-scale
// Gauss-Legendre cubature, analysis/synthesis, and the smoothed spectrum
// estimator Gamma_hat_j.
namespace spherestats {

struct NeedletWindow {
  double B = 2.0;
  int j_max = 0;

  // b(xi): smooth, supported on [1/B, B], with sum_j b^2(l/B^j) = 1 for all
  // l covered by scales up to j_max (telescoping construction).
  double b(double xi) const;
  double b2(double xi) const { const double v = b(xi); return v * v; }
  // band of degrees with b(l/B^j) possibly nonzero: [ceil(B^{j-1}), floor(B^{j+1})]
  int band_lo(int j) const;
  int band_hi(int j) const;
};

struct NeedletFrame {
  NeedletWindow window;
  int lmax = 0;
  int j_min = 1;
  int j_max = 0;  // largest scale with band_hi(j) <= lmax
  // per-scale cubature: a Gauss-Legendre grid exact for harmonic products up
  // to the scale's band limit
  std::vector<std::shared_ptr<const SphereGrid>> grids;  // index j - j_min

  const SphereGrid& grid(int j) const { return *grids[j - j_min]; }
};

struct NeedletCoeffs {
  int j = 0;
  std::vector<double> beta;  // beta_hat_jk, theta-major over the scale grid
};

NeedletWindow build_window(double B, int j_max);

// Scales j_min..j_max chosen so every band [B^{j-1}, B^{j+1}] fits under lmax.
NeedletFrame build_frame(double B, int lmax);

// beta_jk = sqrt(lambda_jk) sum_l b(l/B^j) sum_m a_lm Y_lm(xi_jk)
NeedletCoeffs needlet_analyze(const Alm& alm, const NeedletFrame& frame, int j);

// Synthesis sum_jk beta_jk psi_jk, returned in harmonic form. Reproduces the
// input on the degrees fully covered by the frame's scales.
Alm needlet_synthesize(const std::vector<NeedletCoeffs>& coeffs, const NeedletFrame& frame);

struct NeedletPower {
  int j = 0;
  double gamma_hat = 0.0;       // sum_k beta_jk^2
  double gamma_expected = 0.0;  // sum_l b^2(l/B^j) (2l+1) C_l
};

NeedletPower needlet_power(const Alm& alm, const NeedletFrame& frame, int j,
                           const PowerSpectrum& cl);

}  // namespace spherestats
