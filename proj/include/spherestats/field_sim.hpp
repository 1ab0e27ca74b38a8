#pragma once

#include <cstdint>
#include <vector>

#include "spherestats/grid.hpp"

// Realization generators: Gaussian isotropic a_lm from a spectrum, the
// quadratic (fNL) subordination, multi-channel noise, exact rotations.
// Statistics modules start at l = 2; the transforms keep l = 0, 1.
namespace spherestats {

struct PowerSpectrum {
  int lmax = 0;
  std::vector<double> cl;  // C_l >= 0, l = 0..lmax

  PowerSpectrum() = default;
  PowerSpectrum(int lmax_, std::vector<double> cl_);

  double at(int l) const { return cl[l]; }
  // field variance sum_l (2l+1) C_l / 4pi
  double field_variance(int lmin = 0) const;

  // 1/(l(l+1)) template for l >= 2 (zero monopole/dipole), normalized to
  // unit field variance. Testing template only.
  static PowerSpectrum power_law(int lmax);
  // constant C_l = c for l in [lmin, lmax]
  static PowerSpectrum flat(int lmax, double c, int lmin = 2);
};

struct ChannelSet {
  std::vector<Alm> alms;                      // one per channel, shared lmax
  std::vector<PowerSpectrum> noise_spectra;   // declared C_l^{N_i}

  int p() const { return static_cast<int>(alms.size()); }
  int lmax() const { return alms.empty() ? 0 : alms[0].lmax; }
};

// Draw a_lm with a_l0 ~ N(0, C_l) real and Re/Im a_lm ~ N(0, C_l/2) for
// m > 0, one counter-based stream per (l, m); `channel` selects the noise
// stream (0 = signal, i+1 = channel i).
Alm sample_gaussian_alm(const PowerSpectrum& cl, std::uint64_t seed, std::uint64_t channel = 0);

// Coefficients of T_G + fnl (T_G^2 - sigma_G^2) re-band-limited at the
// working lmax; sigma_G^2 is the analytic field variance of the supplied
// theoretical spectrum.
Alm apply_fnl_alm(const Alm& gaussian, double fnl, const PowerSpectrum& cl,
                  std::shared_ptr<const SphereGrid> grid);
// Same, returned as the re-band-limited pixel map.
SphereMap apply_fnl(const Alm& gaussian, double fnl, const PowerSpectrum& cl,
                    std::shared_ptr<const SphereGrid> grid);

// Each channel = signal + independent Gaussian noise drawn from its
// spectrum; independence across channels by disjoint seed streams.
ChannelSet add_noise_channels(const Alm& signal, const std::vector<PowerSpectrum>& noise_spectra,
                              std::uint64_t seed);

// Exact rotation through Wigner D. The returned coefficients synthesize the
// field x -> T(R x) with R = Rz(alpha) Ry(beta) Rz(gamma) acting on unit
// vectors.
Alm rotate_alm(const Alm& alm, double alpha, double beta, double gamma);

// The point map x -> R x for the same convention, on (theta, phi).
void rotate_point(double alpha, double beta, double gamma, double theta, double phi,
                  double* theta_out, double* phi_out);

}  // namespace spherestats
