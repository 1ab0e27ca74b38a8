#include "spherestats/bispectrum.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace spherestats {

namespace {

// 3j tables per (l1,l2,l3): w[(m1+l1)(2l2+1) + (m2+l2)] with m3 = -m1-m2.
// Shared across sims of an ensemble, hence the process-wide cache.
using Table = std::vector<double>;

std::shared_ptr<const Table> threej_table(int l1, int l2, int l3) {
  static std::mutex mu;
  static std::unordered_map<std::uint64_t, std::shared_ptr<const Table>> cache;
  const std::uint64_t key =
      (static_cast<std::uint64_t>(l1) << 24) | (static_cast<std::uint64_t>(l2) << 12) |
      static_cast<std::uint64_t>(l3);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto tab = std::make_shared<Table>(static_cast<std::size_t>(2 * l1 + 1) * (2 * l2 + 1), 0.0);
  // fill one half and mirror through (m1,m2,m3) -> (-m1,-m2,-m3), exact for
  // even l1+l2+l3; the exact mirror symmetry keeps the m-sum exactly real
  for (int m1 = 0; m1 <= l1; ++m1)
    for (int m2 = (m1 == 0 ? 0 : -l2); m2 <= l2; ++m2) {
      const int m3 = -m1 - m2;
      if (m3 < -l3 || m3 > l3) continue;
      const double w = wigner_3j(l1, l2, l3, m1, m2, m3);
      (*tab)[static_cast<std::size_t>(m1 + l1) * (2 * l2 + 1) + (m2 + l2)] = w;
      (*tab)[static_cast<std::size_t>(-m1 + l1) * (2 * l2 + 1) + (-m2 + l2)] = w;
    }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(tab)).first->second;
}

double sample_cl(const Alm& alm, int l) {
  double s = std::norm(alm.at(l, 0));
  for (int m = 1; m <= l; ++m) s += 2.0 * std::norm(alm.at(l, m));
  return s / (2.0 * l + 1.0);
}

double bispectrum_core(const Alm& alm, int l1, int l2, int l3, double c1, double c2, double c3) {
  if (!bispectrum_admissible(l1, l2, l3)) return 0.0;
  if (l1 > alm.lmax || l2 > alm.lmax || l3 > alm.lmax)
    throw std::invalid_argument("bispectrum: degree exceeds band limit");
  if (c1 <= 0.0 || c2 <= 0.0 || c3 <= 0.0)
    throw std::invalid_argument("bispectrum: nonpositive spectrum in the denominator");
  const auto tab = threej_table(l1, l2, l3);
  cdouble sum(0.0, 0.0);
  for (int m1 = -l1; m1 <= l1; ++m1) {
    const cdouble a1 = alm.get(l1, m1);
    const std::size_t row = static_cast<std::size_t>(m1 + l1) * (2 * l2 + 1);
    for (int m2 = -l2; m2 <= l2; ++m2) {
      const int m3 = -m1 - m2;
      if (m3 < -l3 || m3 > l3) continue;
      const double w = (*tab)[row + (m2 + l2)];
      if (w == 0.0) continue;
      sum += w * a1 * alm.get(l2, m2) * alm.get(l3, m3);
    }
  }
  const int lsum = l1 + l2 + l3;
  const double phase = (lsum / 2) % 2 == 0 ? 1.0 : -1.0;
  const double scale = std::sqrt(c1 * c2 * c3);
  const double re = phase * sum.real() / scale;
  if (std::abs(sum.imag() / scale) > 1e-10 * std::max(1.0, std::abs(re)))
    throw std::runtime_error("bispectrum: non-real invariant sum");
  return re;
}

}  // namespace

bool bispectrum_admissible(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return false;
  if ((l1 + l2 + l3) % 2 != 0) return false;
  return l3 >= std::abs(l1 - l2) && l3 <= l1 + l2;
}

double bispectrum_I(const Alm& alm, const PowerSpectrum& cl, int l1, int l2, int l3) {
  if (!bispectrum_admissible(l1, l2, l3)) return 0.0;
  return bispectrum_core(alm, l1, l2, l3, cl.at(l1), cl.at(l2), cl.at(l3));
}

double bispectrum_I_hat(const Alm& alm, int l1, int l2, int l3) {
  if (!bispectrum_admissible(l1, l2, l3)) return 0.0;
  return bispectrum_core(alm, l1, l2, l3, sample_cl(alm, l1), sample_cl(alm, l2),
                         sample_cl(alm, l3));
}

IntegratedBispectrum integrated_J1(const Alm& alm, int L, int K, int l1_base) {
  if (L < 2 || L > alm.lmax) throw std::invalid_argument("integrated_J1: L out of range");
  if (K < 1 || l1_base + K > alm.lmax)
    throw std::invalid_argument("integrated_J1: offsets exceed the band limit");
  IntegratedBispectrum out;
  out.mode = IntegratedBispectrum::Mode::Squeezed;
  out.L = L;
  out.K = K;
  out.r.resize(L + 1);
  out.series.resize(L + 1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(K));
  double acc = 0.0;
  for (int l2 = 0; l2 <= L; ++l2) {
    if (l2 >= 2) {
      for (int k = 1; k <= K; ++k) acc += norm * bispectrum_I_hat(alm, l1_base + k, l2, l2);
    }
    out.r[l2] = static_cast<double>(l2) / L;
    out.series[l2] = acc;
  }
  return out;
}

IntegratedBispectrum integrated_J2(const Alm& alm, int L) {
  if (L < 2 || L > alm.lmax) throw std::invalid_argument("integrated_J2: L out of range");
  IntegratedBispectrum out;
  out.mode = IntegratedBispectrum::Mode::Equilateral;
  out.L = L;
  out.r.resize(L + 1);
  out.series.resize(L + 1);
  double acc = 0.0;
  for (int l = 0; l <= L; ++l) {
    if (l >= 2) acc += bispectrum_I_hat(alm, l, l, l);
    out.r[l] = static_cast<double>(l) / L;
    out.series[l] = acc;
  }
  return out;
}

}  // namespace spherestats
