#include "spherestats/smhw.hpp"

#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// raw hat profile before normalization; x = 2 tan(theta/2)
double raw_profile(double theta, double R) {
  const double x = 2.0 * std::tan(0.5 * theta);
  const double s = 1.0 + 0.25 * x * x;
  const double xr = x / R;
  return s * s * (2.0 - xr * xr) * std::exp(-0.5 * xr * xr);
}

}  // namespace

SmhwKernel smhw_kernel(double R, std::shared_ptr<const SphereGrid> grid) {
  if (R <= 0.0) throw std::invalid_argument("smhw_kernel: scale must be positive");
  SmhwKernel k;
  k.R = R;
  k.grid = std::move(grid);
  const SphereGrid& g = *k.grid;
  k.profile.resize(g.ntheta());
  for (int i = 0; i < g.ntheta(); ++i) k.profile[i] = raw_profile(g.thetas[i], R);

  // ring-integrated cubature (profile is phi-independent): ring weight
  // 2 pi w_i for integrals, so L2 norm and monopole use the theta rule only
  double norm2 = 0.0;
  for (int i = 0; i < g.ntheta(); ++i)
    norm2 += 2.0 * kPi * g.weights[i] * k.profile[i] * k.profile[i];
  k.normalization = std::sqrt(norm2);
  for (double& v : k.profile) v /= k.normalization;

  double monopole = 0.0;
  for (int i = 0; i < g.ntheta(); ++i) monopole += 2.0 * kPi * g.weights[i] * k.profile[i];
  k.monopole_shift = monopole / (4.0 * kPi);
  for (double& v : k.profile) v -= k.monopole_shift;

  // psi_l = cubature of Psi conj(Y_l0); the same rule the direct transform
  // uses, so the two routes agree to rounding
  k.legendre_coeffs.assign(g.lmax + 1, 0.0);
  for (int i = 0; i < g.ntheta(); ++i) {
    const double* tab = g.legendre_row(i);
    const double w = 2.0 * kPi * g.weights[i] * k.profile[i];
    for (int l = 0; l <= g.lmax; ++l) k.legendre_coeffs[l] += w * tab[tri_index(l, 0)];
  }
  return k;
}

double smhw_profile(const SmhwKernel& kernel, double theta) {
  return raw_profile(theta, kernel.R) / kernel.normalization - kernel.monopole_shift;
}

SphereMap smhw_transform(const Alm& alm, const SmhwKernel& kernel) {
  const SphereGrid& g = *kernel.grid;
  if (alm.lmax > g.lmax) throw std::invalid_argument("smhw_transform: band limit mismatch");
  Alm w(alm.lmax);
  for (int l = 0; l <= alm.lmax; ++l) {
    const double f = std::sqrt(4.0 * kPi / (2.0 * l + 1.0)) * kernel.legendre_coeffs[l];
    for (int m = 0; m <= l; ++m) w.at(l, m) = f * alm.at(l, m);
  }
  return synthesize(w, kernel.grid);
}

double smhw_coefficient_direct(const Alm& alm, const SmhwKernel& kernel, double theta0,
                               double phi0) {
  const SphereGrid& g = *kernel.grid;
  if (alm.lmax > g.lmax) throw std::invalid_argument("smhw: band limit mismatch");
  const SphereMap map = synthesize(alm, kernel.grid);
  const double ct0 = std::cos(theta0), st0 = std::sin(theta0);
  double acc = 0.0;
  for (int i = 0; i < g.ntheta(); ++i) {
    const double ct = g.costhetas[i], st = std::sin(g.thetas[i]);
    for (int j = 0; j < g.nphi; ++j) {
      const double cang = ct0 * ct + st0 * st * std::cos(g.phi(j) - phi0);
      const double ang = std::acos(std::min(1.0, std::max(-1.0, cang)));
      acc += g.pixel_weight(i) * map.values[g.pix(i, j)] * smhw_profile(kernel, ang);
    }
  }
  return acc;
}

std::vector<double> default_smhw_scales() { return {0.05, 0.1, 0.2, 0.4, 0.8}; }

stats::Moments smhw_moments(const SphereMap& coeff_map) {
  const SphereGrid& g = *coeff_map.grid;
  std::vector<double> values, weights;
  for (int i = 0; i < g.ntheta(); ++i)
    for (int j = 0; j < g.nphi; ++j) {
      if (!coeff_map.observed[g.pix(i, j)]) continue;
      values.push_back(coeff_map.values[g.pix(i, j)]);
      weights.push_back(g.pixel_weight(i));
    }
  if (values.size() < 100)
    throw std::invalid_argument("smhw_moments: fewer than 100 observed pixels");
  return stats::weighted_moments(values, weights);
}

}  // namespace spherestats
