#include <cmath>

#include "doctest.h"
#include "spherestats/curvature.hpp"
#include "spherestats/field_sim.hpp"

using namespace spherestats;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("T = cos(theta): Hessian is -cos(theta) times the identity") {
  Alm alm(4);
  alm.at(1, 0) = std::sqrt(4 * kPi / 3.0);  // Y_10 = sqrt(3/4pi) cos(theta)
  for (double theta : {0.3, 1.0, kPi / 2, 2.2}) {
    for (double phi : {0.0, 1.7}) {
      const auto d = field_derivatives(alm, theta, phi);
      CHECK(d.t == doctest::Approx(std::cos(theta)).epsilon(1e-12));
      const auto h = covariant_hessian(d, theta, phi);
      CHECK(h.h_tt == doctest::Approx(-std::cos(theta)).epsilon(1e-10).scale(1.0));
      CHECK(h.h_pp == doctest::Approx(-std::cos(theta)).epsilon(1e-10).scale(1.0));
      CHECK(h.h_tp == doctest::Approx(0.0).scale(1.0));
    }
  }
}

TEST_CASE("classification by eigenvalue signs") {
  CovariantHessian h;
  h.eig1 = -0.5; h.eig2 = -1.0;
  CHECK(classify_point(h, 1e-3) == CurvatureClass::Lake);
  h.eig1 = 1.0; h.eig2 = 0.5;
  CHECK(classify_point(h, 1e-3) == CurvatureClass::Hill);
  h.eig1 = 1.0; h.eig2 = -1.0;
  CHECK(classify_point(h, 1e-3) == CurvatureClass::Saddle);
  h.eig1 = 1e-5; h.eig2 = -1e-5;
  CHECK(classify_point(h, 1e-3) == CurvatureClass::Degenerate);
}

TEST_CASE("hessian matches finite differences of the synthesized field") {
  const int lmax = 16;
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(lmax), 13);
  auto field = [&](double theta, double phi) {
    cdouble s = 0;
    for (int l = 0; l <= lmax; ++l)
      for (int m = -l; m <= l; ++m) s += alm.get(l, m) * ylm(l, m, theta, phi);
    return s.real();
  };
  const double h = 1e-4;
  for (double theta : {0.6, 1.4, 2.5}) {
    const double phi = 0.9;
    const auto d = field_derivatives(alm, theta, phi);
    const double fd_t = (field(theta + h, phi) - field(theta - h, phi)) / (2 * h);
    const double fd_tt =
        (field(theta + h, phi) - 2 * field(theta, phi) + field(theta - h, phi)) / (h * h);
    CHECK(d.d_theta == doctest::Approx(fd_t).epsilon(1e-5));
    CHECK(d.d_theta_theta == doctest::Approx(fd_tt).epsilon(1e-4));
  }
}

TEST_CASE("hessian eigenvalues are rotation equivariant") {
  // the eigenvalue pair at a point maps to the rotated point's pair
  const int lmax = 12;
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(lmax), 19);
  const double a = 0.8, b = 0.6, g = 1.4;
  const auto rot = rotate_alm(alm, a, b, g);
  const double theta = 1.1, phi = 2.0;
  double th2, ph2;
  rotate_point(a, b, g, theta, phi, &th2, &ph2);
  const auto h1 = covariant_hessian(field_derivatives(rot, theta, phi), theta, phi);
  const auto h2 = covariant_hessian(field_derivatives(alm, th2, ph2), th2, ph2);
  CHECK(h1.eig1 == doctest::Approx(h2.eig1).epsilon(1e-8));
  CHECK(h1.eig2 == doctest::Approx(h2.eig2).epsilon(1e-8));
}

TEST_CASE("density curves partition the excursion set") {
  const int lmax = 16;
  const auto grid = build_grid(lmax);
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(lmax), 23);
  const auto map = synthesize(alm, grid);
  const auto curve = curvature_densities(alm, map, default_nu_grid(), 1e-8);
  CHECK(curve.nu.size() == 13);
  for (std::size_t i = 0; i < curve.nu.size(); ++i) {
    if (!curve.defined[i]) continue;
    const double total = curve.h[i] + curve.l[i] + curve.saddle[i] + curve.degenerate[i];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(curve.h[i] >= 0.0);
    CHECK(curve.l[i] >= 0.0);
  }
  // high excursion sets sit on peaks, where the Hessian is negative definite
  const std::size_t i2 = 10;  // nu = 2.0
  REQUIRE(curve.nu[i2] == 2.0);
  if (curve.defined[i2]) CHECK(curve.l[i2] > curve.h[i2]);
}

TEST_CASE("normalized_densities divides by the baseline") {
  DensityCurve a, b;
  a.nu = b.nu = {0.0, 1.0};
  a.h = {0.5, 0.2}; a.l = {0.2, 0.6};
  a.saddle = a.degenerate = {0.0, 0.0};
  a.defined = {1, 1};
  b = a;
  b.h = {0.25, 0.1}; b.l = {0.4, 0.3};
  const auto n = normalized_densities(a, b);
  CHECK(n.h_norm[0] == doctest::Approx(2.0));
  CHECK(n.l_norm[1] == doctest::Approx(2.0));
  b.h[0] = 0.0;
  CHECK_THROWS(normalized_densities(a, b));
}
