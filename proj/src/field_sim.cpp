#include "spherestats/field_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spherestats/rng.hpp"

namespace spherestats {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

PowerSpectrum::PowerSpectrum(int lmax_, std::vector<double> cl_) : lmax(lmax_), cl(std::move(cl_)) {
  if (static_cast<int>(cl.size()) != lmax + 1)
    throw std::invalid_argument("PowerSpectrum: size mismatch");
  for (const double c : cl)
    if (!(c >= 0.0)) throw std::invalid_argument("PowerSpectrum: C_l must be >= 0");
}

double PowerSpectrum::field_variance(int lmin) const {
  double s = 0.0;
  for (int l = lmin; l <= lmax; ++l) s += (2.0 * l + 1.0) * cl[l];
  return s / (4.0 * kPi);
}

PowerSpectrum PowerSpectrum::power_law(int lmax) {
  std::vector<double> c(lmax + 1, 0.0);
  for (int l = 2; l <= lmax; ++l) c[l] = 1.0 / (static_cast<double>(l) * (l + 1));
  PowerSpectrum ps(lmax, std::move(c));
  const double v = ps.field_variance();
  for (double& x : ps.cl) x /= v;
  return ps;
}

PowerSpectrum PowerSpectrum::flat(int lmax, double c, int lmin) {
  std::vector<double> v(lmax + 1, 0.0);
  for (int l = lmin; l <= lmax; ++l) v[l] = c;
  return PowerSpectrum(lmax, std::move(v));
}

Alm sample_gaussian_alm(const PowerSpectrum& cl, std::uint64_t seed, std::uint64_t channel) {
  Alm alm(cl.lmax);
  for (int l = 0; l <= cl.lmax; ++l) {
    const double c = cl.at(l);
    if (c == 0.0) continue;
    const double sd = std::sqrt(c);
    const double sdh = std::sqrt(0.5 * c);
    {
      rng::Stream s(rng::stream_key(seed, channel, l, 0));
      alm.at(l, 0) = cdouble(sd * s.next_normal(), 0.0);
    }
    for (int m = 1; m <= l; ++m) {
      rng::Stream s(rng::stream_key(seed, channel, l, m));
      const double re = sdh * s.next_normal();
      const double im = sdh * s.next_normal();
      alm.at(l, m) = cdouble(re, im);
    }
  }
  return alm;
}

Alm apply_fnl_alm(const Alm& gaussian, double fnl, const PowerSpectrum& cl,
                  std::shared_ptr<const SphereGrid> grid) {
  if (fnl == 0.0) return gaussian;
  if (cl.lmax < gaussian.lmax)
    throw std::invalid_argument("apply_fnl: theoretical spectrum does not cover the band limit");
  const double sigma2 = cl.field_variance();
  SphereMap map = synthesize(gaussian, grid);
  for (double& v : map.values) v = v + fnl * (v * v - sigma2);
  Alm out = analyze(map);
  // keep only the working band (analyze already truncates at grid lmax;
  // restrict further to the input band limit)
  if (out.lmax != gaussian.lmax) {
    Alm trimmed(gaussian.lmax);
    for (int l = 0; l <= gaussian.lmax; ++l)
      for (int m = 0; m <= l; ++m) trimmed.at(l, m) = out.at(l, m);
    return trimmed;
  }
  return out;
}

SphereMap apply_fnl(const Alm& gaussian, double fnl, const PowerSpectrum& cl,
                    std::shared_ptr<const SphereGrid> grid) {
  if (fnl == 0.0) return synthesize(gaussian, grid);
  return synthesize(apply_fnl_alm(gaussian, fnl, cl, grid), grid);
}

ChannelSet add_noise_channels(const Alm& signal, const std::vector<PowerSpectrum>& noise_spectra,
                              std::uint64_t seed) {
  ChannelSet set;
  set.noise_spectra = noise_spectra;
  set.alms.reserve(noise_spectra.size());
  for (std::size_t i = 0; i < noise_spectra.size(); ++i) {
    if (noise_spectra[i].lmax != signal.lmax)
      throw std::invalid_argument("add_noise_channels: band limit mismatch");
    Alm channel = signal;
    const Alm noise = sample_gaussian_alm(noise_spectra[i], seed, i + 1);
    for (std::size_t k = 0; k < channel.c.size(); ++k) channel.c[k] += noise.c[k];
    set.alms.push_back(std::move(channel));
  }
  return set;
}

Alm rotate_alm(const Alm& alm, double alpha, double beta, double gamma) {
  Alm out(alm.lmax);
  for (int l = 0; l <= alm.lmax; ++l) {
    const WignerDBlock D = wigner_D(l, alpha, beta, gamma);
    // full-m source vector through the reality condition
    std::vector<cdouble> a(2 * l + 1);
    for (int m = -l; m <= l; ++m) a[m + l] = alm.get(l, m);
    for (int m = 0; m <= l; ++m) {
      cdouble s = 0.0;
      for (int mp = -l; mp <= l; ++mp) s += std::conj(D(mp, m)) * a[mp + l];
      out.at(l, m) = s;
    }
  }
  return out;
}

void rotate_point(double alpha, double beta, double gamma, double theta, double phi,
                  double* theta_out, double* phi_out) {
  const double x = std::sin(theta) * std::cos(phi);
  const double y = std::sin(theta) * std::sin(phi);
  const double z = std::cos(theta);
  auto rot_z = [](double ang, double& a, double& b) {
    const double c = std::cos(ang), s = std::sin(ang);
    const double na = c * a - s * b;
    b = s * a + c * b;
    a = na;
  };
  double vx = x, vy = y, vz = z;
  // R = Rz(alpha) Ry(beta) Rz(gamma)
  rot_z(gamma, vx, vy);
  {
    const double c = std::cos(beta), s = std::sin(beta);
    const double nx = c * vx + s * vz;
    vz = -s * vx + c * vz;
    vx = nx;
  }
  rot_z(alpha, vx, vy);
  *theta_out = std::acos(std::clamp(vz, -1.0, 1.0));
  *phi_out = std::atan2(vy, vx);
  if (*phi_out < 0.0) *phi_out += 2.0 * kPi;
}

}  // namespace spherestats
