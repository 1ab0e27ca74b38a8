#include <cmath>

#include "doctest.h"
#include "spherestats/field_sim.hpp"
#include "spherestats/spectra.hpp"
#include "spherestats/stats.hpp"

using namespace spherestats;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("estimate_cl on hand-built coefficients") {
  Alm alm(4);
  alm.at(3, 0) = 2.0;
  alm.at(3, 2) = cdouble(1.0, -1.0);
  const auto est = estimate_cl(alm);
  // (|a_30|^2 + 2 |a_32|^2) / 7
  CHECK(est.chat[3] == doctest::Approx((4.0 + 2 * 2.0) / 7.0).epsilon(1e-15));
  CHECK(est.chat[2] == 0.0);
}

TEST_CASE("auto and cross equal the raw spectrum when noise is zero") {
  const int lmax = 16;
  const auto sig = sample_gaussian_alm(PowerSpectrum::power_law(lmax), 9);
  const auto zero = PowerSpectrum::flat(lmax, 0.0);
  const auto set = add_noise_channels(sig, {zero, zero, zero}, 9);
  const auto raw = estimate_cl(sig);
  const auto ap = auto_power(set);
  const auto cp = cross_power(set);
  for (int l = 2; l <= lmax; ++l) {
    CHECK(ap.chat[l] == doctest::Approx(raw.chat[l]).epsilon(1e-12));
    CHECK(cp.chat[l] == doctest::Approx(raw.chat[l]).epsilon(1e-12));
  }
}

TEST_CASE("auto and cross are unbiased under noise") {
  const int lmax = 16, l = 10, N = 3000;
  const auto cl = PowerSpectrum::flat(lmax, 1.0);
  const auto noise = PowerSpectrum::flat(lmax, 0.5);
  std::vector<double> a, c;
  for (int i = 0; i < N; ++i) {
    const auto sig = sample_gaussian_alm(cl, 40000 + i);
    const auto set = add_noise_channels(sig, {noise, noise}, 40000 + i);
    a.push_back(auto_power(set).chat[l]);
    c.push_back(cross_power(set).chat[l]);
  }
  const double se = std::sqrt(2.0 / (2 * l + 1)) * 2.0 / std::sqrt(N);  // loose bound
  CHECK(std::abs(stats::mean(a) - 1.0) < 4 * se);
  CHECK(std::abs(stats::mean(c) - 1.0) < 4 * se);
}

TEST_CASE("cross_power requires two channels") {
  const auto sig = sample_gaussian_alm(PowerSpectrum::power_law(8), 1);
  ChannelSet set;
  set.alms = {sig};
  set.noise_spectra = {PowerSpectrum::flat(8, 0.0)};
  CHECK_THROWS(cross_power(set));
}

TEST_CASE("hausman H_l has unit variance under the null") {
  const int lmax = 24, N = 1500;
  const auto cl = PowerSpectrum::flat(lmax, 1.0);
  const auto n1 = PowerSpectrum::flat(lmax, 1.0);
  const auto n2 = PowerSpectrum::flat(lmax, 1.3);
  std::vector<double> h16, h24;
  for (int i = 0; i < N; ++i) {
    const auto sig = sample_gaussian_alm(cl, 70000 + i);
    const auto set = add_noise_channels(sig, {n1, n2}, 70000 + i);
    const auto hs = hausman_statistic(set, {n1, n2});
    h16.push_back(hs.at(16));
    h24.push_back(hs.at(24));
  }
  CHECK(std::abs(stats::mean(h16)) < 0.1);
  CHECK(stats::variance(h16) == doctest::Approx(1.0).epsilon(0.15));
  CHECK(stats::variance(h24) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("hausman error paths") {
  const auto sig = sample_gaussian_alm(PowerSpectrum::power_law(8), 2);
  const auto zero = PowerSpectrum::flat(8, 0.0);
  const auto set = add_noise_channels(sig, {zero, zero}, 2);
  // zero declared noise gives zero variance: rejected
  CHECK_THROWS(hausman_statistic(set, {zero, zero}));
  // declared-noise count must match channels
  const auto n = PowerSpectrum::flat(8, 0.1);
  CHECK_THROWS(hausman_statistic(set, {n}));
}

TEST_CASE("brownian_functional builds the partial-sum process") {
  HausmanSeries h;
  h.lmin = 2;
  h.lmax = 5;
  h.h = {1.0, -1.0, 2.0, 0.5};
  h.delta_var = {1, 1, 1, 1};
  const auto b = brownian_functional(h, 5);
  const double rt = std::sqrt(4.0);
  CHECK(b.b.back() == doctest::Approx(2.5 / rt).epsilon(1e-14));
  CHECK(b.ks == doctest::Approx(2.5 / rt).epsilon(1e-14));
  CHECK(b.cvm > 0.0);
  CHECK(b.r.front() == 0.0);
  CHECK(b.r.back() == 1.0);
}

TEST_CASE("masked_alm reduces to analyze on full-sky maps") {
  const int lmax = 10;
  const auto grid = build_grid(lmax);
  const auto map = synthesize(sample_gaussian_alm(PowerSpectrum::power_law(lmax), 6), grid);
  const auto a = analyze(map);
  const auto b = masked_alm(map, lmax);
  double worst = 0;
  for (std::size_t i = 0; i < a.c.size(); ++i) worst = std::max(worst, std::abs(a.c[i] - b.c[i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("masked_alm rejects a fully masked map") {
  const auto grid = build_grid(4);
  SphereMap map(grid);
  std::vector<std::size_t> all(grid->npix());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto masked = apply_mask(map, Mask::pixel_list(all));
  CHECK_THROWS(masked_alm(masked, 4));
}

TEST_CASE("coupling_covariance: no mask gives the diagonal isotropic covariance") {
  const int lmax = 4;
  const auto cl = PowerSpectrum::flat(lmax, 0.7, 0);
  const auto cov = coupling_covariance(Mask::band(0.0), lmax, cl, lmax);
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = 0; l2 <= lmax; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const auto v = cov.cov_at(l1, m1, l2, m2);
          const double want = (l1 == l2 && m1 == m2) ? 0.7 : 0.0;
          CHECK(std::abs(v - want) < 1e-10);
        }
}

TEST_CASE("coupling_covariance is hermitian and bounded") {
  const int lmax = 6;
  const auto cl = PowerSpectrum::power_law(12);
  const auto cov = coupling_covariance(Mask::band(0.3), lmax, cl, 12);
  const auto dim = cov.dim();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      CHECK(std::abs(cov.cov[i * dim + j] - std::conj(cov.cov[j * dim + i])) < 1e-12);
  CHECK(cov.tail_bound >= 0.0);
  CHECK_THROWS(coupling_covariance(Mask::band(0.3), 20, cl));  // lmax cap
}
