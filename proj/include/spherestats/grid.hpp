#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "spherestats/harmonic.hpp"

namespace spherestats {

// Gauss-Legendre colatitudes x uniform longitudes with cubature weights.
// Quadrature is exact for spherical-harmonic products up to degree 2*lmax,
// which makes analyze/synthesize mutually inverse on band-limited maps.
// Immutable after construction and shareable across threads.
struct SphereGrid {
  int lmax = 0;
  std::vector<double> thetas;     // lmax+1 nodes, strictly inside (0, pi)
  std::vector<double> costhetas;  // Gauss-Legendre abscissae, descending theta order
  std::vector<double> weights;    // matching quadrature weights (sum = 2)
  int nphi = 0;                   // 2*lmax+1 uniform longitudes
  double dphi = 0.0;
  // normalized associated Legendre lambda_lm(cos theta_i), one tri-table per row
  std::vector<double> legendre;  // size ntheta * tri_size(lmax)

  static SphereGrid build(int lmax);

  int ntheta() const { return static_cast<int>(thetas.size()); }
  std::size_t npix() const { return static_cast<std::size_t>(ntheta()) * nphi; }
  double phi(int j) const { return dphi * j; }
  std::size_t pix(int i, int j) const { return static_cast<std::size_t>(i) * nphi + j; }
  // cubature weight of pixel (i, j)
  double pixel_weight(int i) const { return weights[i] * dphi; }
  const double* legendre_row(int i) const { return legendre.data() + static_cast<std::size_t>(i) * tri_size(lmax); }
};

// Harmonic coefficients a_lm for 0 <= m <= l <= lmax; negative m implied by
// the reality condition a_{l,-m} = (-1)^m conj(a_lm).
struct Alm {
  int lmax = 0;
  std::vector<cdouble> c;

  explicit Alm(int lmax_ = 0) : lmax(lmax_), c(tri_size(lmax_)) {}

  cdouble& at(int l, int m) { return c[tri_index(l, m)]; }
  const cdouble& at(int l, int m) const { return c[tri_index(l, m)]; }
  // any m, negative through the reality condition
  cdouble get(int l, int m) const {
    if (m >= 0) return c[tri_index(l, m)];
    const cdouble v = std::conj(c[tri_index(l, -m)]);
    return (m % 2 == 0) ? v : -v;
  }
};

// Field samples on a SphereGrid with optional mask flags (true = observed).
struct SphereMap {
  std::shared_ptr<const SphereGrid> grid;
  std::vector<double> values;       // theta-major
  std::vector<std::uint8_t> observed;

  SphereMap() = default;
  explicit SphereMap(std::shared_ptr<const SphereGrid> g)
      : grid(std::move(g)), values(grid->npix(), 0.0), observed(grid->npix(), 1) {}

  std::size_t n_masked() const;
  bool fully_observed() const { return n_masked() == 0; }
};

// Sky mask: either an azimuthal band |cos theta| < sin(b0) around the
// equator, or an explicit pixel list.
struct Mask {
  enum class Kind { Band, Pixels };
  Kind kind = Kind::Band;
  double b0 = 0.0;                   // band half-width, radians
  std::vector<std::size_t> pixels;   // masked pixels for Kind::Pixels

  static Mask band(double b0);
  static Mask pixel_list(std::vector<std::size_t> pixels);
  bool masks(const SphereGrid& grid, int i, int j) const;
};

std::shared_ptr<const SphereGrid> build_grid(int lmax);

// T(x_i) = sum_lm a_lm Y_lm(x_i); requires alm.lmax <= grid.lmax.
SphereMap synthesize(const Alm& alm, std::shared_ptr<const SphereGrid> grid);

// a_lm = cubature of T conj(Y_lm). The map must be fully observed; masked
// input goes through masked_alm (spectra module) instead.
Alm analyze(const SphereMap& map);

// Projection coefficients over the observed pixels only; masked pixels
// contribute 0. Shared by analyze and masked_alm.
Alm masked_projection(const SphereMap& map, int lmax);

// Cubature of T over the sphere; masked pixels contribute 0.
double integrate(const SphereMap& map);

// Returns a copy of the map with mask flags set; values preserved at
// observed pixels.
SphereMap apply_mask(const SphereMap& map, const Mask& mask);

}  // namespace spherestats
