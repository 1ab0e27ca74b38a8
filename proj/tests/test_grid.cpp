#include <cmath>
#include <numeric>

#include "doctest.h"
#include "spherestats/field_sim.hpp"
#include "spherestats/grid.hpp"

using namespace spherestats;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("grid weights sum to 2 and integrate constants exactly") {
  for (int lmax : {2, 8, 65}) {
    const auto grid = build_grid(lmax);
    CHECK(grid->ntheta() == lmax + 1);
    CHECK(grid->nphi == 2 * lmax + 1);
    double ws = std::accumulate(grid->weights.begin(), grid->weights.end(), 0.0);
    CHECK(ws == doctest::Approx(2.0).epsilon(1e-14));
    SphereMap one(grid);
    for (auto& v : one.values) v = 1.0;
    CHECK(integrate(one) == doctest::Approx(4 * kPi).epsilon(1e-14));
  }
}

TEST_CASE("cubature reproduces harmonic orthonormality") {
  const auto grid = build_grid(12);
  for (int l1 : {0, 3, 9})
    for (int m1 = 0; m1 <= l1; m1 += std::max(1, l1 / 2))
      for (int l2 : {2, 9, 12})
        for (int m2 = 0; m2 <= l2; m2 += std::max(1, l2 / 2)) {
          cdouble s = 0;
          for (int i = 0; i < grid->ntheta(); ++i)
            for (int j = 0; j < grid->nphi; ++j)
              s += grid->pixel_weight(i) * ylm(l1, m1, grid->thetas[i], grid->phi(j)) *
                   std::conj(ylm(l2, m2, grid->thetas[i], grid->phi(j)));
          const double want = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
          CHECK(std::abs(s - want) < 1e-13);
        }
}

TEST_CASE("analyze inverts synthesize on band-limited fields") {
  const int lmax = 24;
  const auto grid = build_grid(lmax);
  auto cl = PowerSpectrum::power_law(lmax);
  auto alm = sample_gaussian_alm(cl, 42);
  const auto map = synthesize(alm, grid);
  const auto back = analyze(map);
  double worst = 0;
  for (std::size_t i = 0; i < alm.c.size(); ++i)
    worst = std::max(worst, std::abs(alm.c[i] - back.c[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("synthesized maps are real-valued fields") {
  // single-mode comparison against the explicit harmonic sum
  const int lmax = 6;
  const auto grid = build_grid(lmax);
  Alm alm(lmax);
  alm.at(3, 2) = cdouble(0.7, -0.4);
  const auto map = synthesize(alm, grid);
  for (int i = 0; i < grid->ntheta(); ++i)
    for (int j = 0; j < grid->nphi; ++j) {
      const cdouble want = alm.get(3, 2) * ylm(3, 2, grid->thetas[i], grid->phi(j)) +
                           alm.get(3, -2) * ylm(3, -2, grid->thetas[i], grid->phi(j));
      CHECK(std::abs(map.values[grid->pix(i, j)] - want.real()) < 1e-13);
      CHECK(std::abs(want.imag()) < 1e-13);
    }
}

TEST_CASE("band mask flags the right pixels and analyze rejects masked maps") {
  const auto grid = build_grid(16);
  SphereMap map(grid);
  const double b0 = 0.3;
  const auto masked = apply_mask(map, Mask::band(b0));
  std::size_t n_masked = 0;
  for (int i = 0; i < grid->ntheta(); ++i)
    for (int j = 0; j < grid->nphi; ++j) {
      const bool in_band = std::abs(std::cos(grid->thetas[i])) < std::sin(b0);
      CHECK(static_cast<bool>(masked.observed[grid->pix(i, j)]) == !in_band);
      n_masked += in_band;
    }
  CHECK(masked.n_masked() == n_masked);
  CHECK(n_masked > 0);
  CHECK_THROWS(analyze(masked));
}

TEST_CASE("pixel-list mask") {
  const auto grid = build_grid(4);
  SphereMap map(grid);
  const auto masked = apply_mask(map, Mask::pixel_list({0, 5, 7}));
  CHECK(masked.n_masked() == 3);
  CHECK(!masked.observed[5]);
  CHECK(masked.observed[6]);
}

TEST_CASE("masked_projection zeroes masked pixels") {
  const int lmax = 8;
  const auto grid = build_grid(lmax);
  auto alm = sample_gaussian_alm(PowerSpectrum::power_law(lmax), 7);
  auto map = synthesize(alm, grid);
  auto masked = apply_mask(map, Mask::band(0.25));
  const auto proj = masked_projection(masked, lmax);
  // manual cubature over observed pixels only
  cdouble want = 0;
  for (int i = 0; i < grid->ntheta(); ++i)
    for (int j = 0; j < grid->nphi; ++j)
      if (masked.observed[grid->pix(i, j)])
        want += grid->pixel_weight(i) * masked.values[grid->pix(i, j)] *
                std::conj(ylm(4, 1, grid->thetas[i], grid->phi(j)));
  CHECK(std::abs(proj.at(4, 1) - want) < 1e-13);
}
