#include "spherestats/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

SphereGrid SphereGrid::build(int lmax) {
  if (lmax < 2) throw std::invalid_argument("SphereGrid: lmax < 2");
  SphereGrid g;
  g.lmax = lmax;
  const int n = lmax + 1;
  g.costhetas.resize(n);
  g.weights.resize(n);
  g.thetas.resize(n);
  // Gauss-Legendre nodes of P_n by Newton iteration.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double f = legendre_p(n, x);
      const double df = legendre_p_deriv(n, x);
      const double dx = f / df;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double df = legendre_p_deriv(n, x);
    g.costhetas[i] = x;
    g.weights[i] = 2.0 / ((1.0 - x * x) * df * df);
    g.thetas[i] = std::acos(x);
  }
  g.nphi = 2 * lmax + 1;
  g.dphi = 2.0 * kPi / g.nphi;
  g.legendre.resize(static_cast<std::size_t>(n) * tri_size(lmax));
  for (int i = 0; i < n; ++i)
    legendre_norm_table(lmax, g.costhetas[i], g.legendre.data() + static_cast<std::size_t>(i) * tri_size(lmax));
  return g;
}

std::shared_ptr<const SphereGrid> build_grid(int lmax) {
  return std::make_shared<const SphereGrid>(SphereGrid::build(lmax));
}

std::size_t SphereMap::n_masked() const {
  std::size_t n = 0;
  for (const auto o : observed)
    if (!o) ++n;
  return n;
}

Mask Mask::band(double b0) {
  if (b0 < 0.0 || b0 > kPi / 2.0) throw std::invalid_argument("Mask::band: b0 outside [0, pi/2]");
  Mask m;
  m.kind = Kind::Band;
  m.b0 = b0;
  return m;
}

Mask Mask::pixel_list(std::vector<std::size_t> pixels) {
  Mask m;
  m.kind = Kind::Pixels;
  m.pixels = std::move(pixels);
  return m;
}

bool Mask::masks(const SphereGrid& grid, int i, int j) const {
  if (kind == Kind::Band) return std::abs(grid.costhetas[i]) < std::sin(b0);
  const std::size_t p = grid.pix(i, j);
  for (const auto q : pixels)
    if (q == p) return true;
  return false;
}

SphereMap synthesize(const Alm& alm, std::shared_ptr<const SphereGrid> grid) {
  if (alm.lmax > grid->lmax) throw std::invalid_argument("synthesize: alm band limit exceeds grid");
  SphereMap map(grid);
  const int lmax = alm.lmax;
  const int ntheta = grid->ntheta();
  const int nphi = grid->nphi;
  std::vector<cdouble> fm(lmax + 1);
  for (int i = 0; i < ntheta; ++i) {
    const double* lam = grid->legendre_row(i);
    for (int m = 0; m <= lmax; ++m) {
      cdouble s = 0.0;
      for (int l = m; l <= lmax; ++l) s += alm.at(l, m) * lam[tri_index(l, m)];
      fm[m] = s;
    }
    for (int j = 0; j < nphi; ++j) {
      const double phi = grid->phi(j);
      double t = fm[0].real();
      for (int m = 1; m <= lmax; ++m) {
        const cdouble e = std::polar(1.0, m * phi);
        t += 2.0 * (fm[m] * e).real();
      }
      map.values[grid->pix(i, j)] = t;
    }
  }
  return map;
}

Alm masked_projection(const SphereMap& map, int lmax) {
  const SphereGrid& grid = *map.grid;
  if (lmax > grid.lmax) throw std::invalid_argument("masked_projection: lmax exceeds grid band limit");
  Alm alm(lmax);
  const int ntheta = grid.ntheta();
  const int nphi = grid.nphi;
  std::vector<cdouble> gm(lmax + 1);
  for (int i = 0; i < ntheta; ++i) {
    for (int m = 0; m <= lmax; ++m) gm[m] = 0.0;
    for (int j = 0; j < nphi; ++j) {
      const std::size_t p = grid.pix(i, j);
      if (!map.observed[p]) continue;
      const double v = map.values[p] * grid.dphi;
      if (v == 0.0) continue;
      const double phi = grid.phi(j);
      for (int m = 0; m <= lmax; ++m) gm[m] += v * std::polar(1.0, -m * phi);
    }
    const double* lam = grid.legendre_row(i);
    const double w = grid.weights[i];
    for (int m = 0; m <= lmax; ++m) {
      if (gm[m] == cdouble(0.0, 0.0)) continue;
      const cdouble wg = w * gm[m];
      for (int l = m; l <= lmax; ++l) alm.at(l, m) += wg * lam[tri_index(l, m)];
    }
  }
  return alm;
}

Alm analyze(const SphereMap& map) {
  if (!map.fully_observed()) throw std::invalid_argument("analyze: map has masked pixels");
  return masked_projection(map, map.grid->lmax);
}

double integrate(const SphereMap& map) {
  const SphereGrid& grid = *map.grid;
  double s = 0.0;
  for (int i = 0; i < grid.ntheta(); ++i) {
    double row = 0.0;
    for (int j = 0; j < grid.nphi; ++j) {
      const std::size_t p = grid.pix(i, j);
      if (map.observed[p]) row += map.values[p];
    }
    s += grid.weights[i] * row;
  }
  return s * grid.dphi;
}

SphereMap apply_mask(const SphereMap& map, const Mask& mask) {
  SphereMap out = map;
  const SphereGrid& grid = *map.grid;
  for (int i = 0; i < grid.ntheta(); ++i)
    for (int j = 0; j < grid.nphi; ++j)
      if (mask.masks(grid, i, j)) out.observed[grid.pix(i, j)] = 0;
  return out;
}

}  // namespace spherestats
