#include <cmath>

#include "doctest.h"
#include "spherestats/bispectrum.hpp"
#include "spherestats/field_sim.hpp"
#include "spherestats/harmonic.hpp"
#include "spherestats/stats.hpp"

using namespace spherestats;

TEST_CASE("admissibility: triangle and parity") {
  CHECK(bispectrum_admissible(2, 2, 2));
  CHECK(bispectrum_admissible(2, 3, 3));
  CHECK(!bispectrum_admissible(2, 2, 3));  // odd sum
  CHECK(!bispectrum_admissible(2, 2, 6));  // triangle
  CHECK(bispectrum_admissible(4, 6, 8));
}

TEST_CASE("inadmissible triples give exactly zero") {
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(12), 3);
  const auto cl = PowerSpectrum::power_law(12);
  CHECK(bispectrum_I(alm, cl, 2, 2, 3) == 0.0);
  CHECK(bispectrum_I(alm, cl, 2, 3, 7) == 0.0);
  CHECK(bispectrum_I_hat(alm, 3, 3, 7) == 0.0);
}

TEST_CASE("I is invariant under permutations of the degrees") {
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(16), 8);
  const auto cl = PowerSpectrum::power_law(16);
  const double ref = bispectrum_I(alm, cl, 4, 6, 8);
  CHECK(bispectrum_I(alm, cl, 6, 4, 8) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(bispectrum_I(alm, cl, 8, 6, 4) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(bispectrum_I(alm, cl, 6, 8, 4) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("I is invariant under rescaling the field") {
  auto alm = sample_gaussian_alm(PowerSpectrum::power_law(12), 4);
  const double ref = bispectrum_I_hat(alm, 4, 4, 6);
  for (auto& c : alm.c) c *= 3.7;
  CHECK(bispectrum_I_hat(alm, 4, 4, 6) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("I is rotation invariant") {
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(16), 12);
  const double ref = bispectrum_I_hat(alm, 6, 6, 8);
  const auto rot = rotate_alm(alm, 1.9, 0.7, -2.3);
  CHECK(bispectrum_I_hat(rot, 6, 6, 8) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("m-sum matches the cubature of T^3 against Gaunt couplings") {
  // sum_{m} (3j) a a a equals the Gaunt-weighted projection of T^3; verify
  // the raw m-sum through the unnormalized bispectrum reconstructed from
  // cubature of T(x)^3 at lmax = 4
  const int lmax = 4;
  const auto grid = build_grid(3 * lmax);
  const auto alm = sample_gaussian_alm(PowerSpectrum::flat(lmax, 1.0, 0), 5);
  // cubature integral of T^3
  Alm wide(3 * lmax);
  for (int l = 0; l <= lmax; ++l)
    for (int m = 0; m <= l; ++m) wide.at(l, m) = alm.at(l, m);
  const auto map = synthesize(wide, grid);
  double cub = 0;
  for (int i = 0; i < grid->ntheta(); ++i)
    for (int j = 0; j < grid->nphi; ++j) {
      const double v = map.values[grid->pix(i, j)];
      cub += grid->pixel_weight(i) * v * v * v;
    }
  // harmonic side: sum over all triples of gaunt-coupled coefficient products
  cdouble harm = 0;
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = 0; l2 <= lmax; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2)
          for (int l3 = 0; l3 <= lmax; ++l3)
            for (int m3 = -l3; m3 <= l3; ++m3)
              harm += alm.get(l1, m1) * alm.get(l2, m2) * alm.get(l3, m3) *
                      gaunt(l1, m1, l2, m2, l3, m3);
  CHECK(std::abs(harm.imag()) < 1e-10);
  CHECK(harm.real() == doctest::Approx(cub).epsilon(1e-10));
}

TEST_CASE("I_hat has mean near zero on Gaussian fields") {
  const int N = 400;
  std::vector<double> v;
  for (int i = 0; i < N; ++i)
    v.push_back(bispectrum_I_hat(sample_gaussian_alm(PowerSpectrum::power_law(12), 3000 + i), 4, 4, 4));
  CHECK(std::abs(stats::mean(v)) < 4 * std::sqrt(stats::variance(v) / N));
}

TEST_CASE("integrated statistics accumulate I_hat") {
  const int L = 16, K = 3;
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(L), 9);
  const auto j1 = integrated_J1(alm, L, K, 2);
  const auto j2 = integrated_J2(alm, L);
  CHECK(j1.r.size() == static_cast<std::size_t>(L + 1));
  CHECK(j1.series.size() == j1.r.size());
  // direct reconstruction of the endpoints
  double want1 = 0;
  for (int l2 = 2; l2 <= L; ++l2)
    for (int k = 1; k <= K; ++k) want1 += bispectrum_I_hat(alm, 2 + k, l2, l2);
  want1 /= std::sqrt(static_cast<double>(K));
  CHECK(j1.series.back() == doctest::Approx(want1).epsilon(1e-10));
  double want2 = 0;
  for (int l = 2; l <= L; ++l) want2 += bispectrum_I_hat(alm, l, l, l);
  CHECK(j2.series.back() == doctest::Approx(want2).epsilon(1e-10));
  // monotone prefix structure: series constant below the first admitted degree
  CHECK(j2.series[0] == 0.0);
  CHECK(j2.series[1] == 0.0);
}

TEST_CASE("degree above the band limit is rejected") {
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(8), 2);
  CHECK_THROWS(bispectrum_I_hat(alm, 8, 8, 10));
}
