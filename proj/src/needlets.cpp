#include "spherestats/needlets.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {

double bump(double t) {
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

// psi(u) = int_{-1}^u bump / int_{-1}^{1} bump, monotone 0 -> 1
double bump_cdf(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  static const double total = quad::integrate(bump, -1.0, 1.0, 10);
  return quad::integrate(bump, -1.0, u, 10) / total;
}

// phi: 1 on [0, 1/B], smooth descent to 0 at 1, 0 beyond
double phi(double t, double B) {
  if (t <= 1.0 / B) return 1.0;
  if (t >= 1.0) return 0.0;
  return bump_cdf(1.0 - 2.0 * B * (t - 1.0 / B) / (B - 1.0));
}

}  // namespace

double NeedletWindow::b(double xi) const {
  const double d = phi(xi / B, B) - phi(xi, B);
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

int NeedletWindow::band_lo(int j) const {
  return static_cast<int>(std::ceil(std::pow(B, j - 1)));
}

int NeedletWindow::band_hi(int j) const {
  return static_cast<int>(std::floor(std::pow(B, j + 1)));
}

NeedletWindow build_window(double B, int j_max) {
  if (B <= 1.0) throw std::invalid_argument("build_window: B must exceed 1");
  return NeedletWindow{B, j_max};
}

NeedletFrame build_frame(double B, int lmax) {
  if (B <= 1.0) throw std::invalid_argument("build_frame: B must exceed 1");
  if (lmax < 2) throw std::invalid_argument("build_frame: lmax < 2");
  NeedletFrame frame;
  frame.lmax = lmax;
  frame.j_min = 1;
  // smallest j_max with B^{j_max} >= lmax, so sum_j b^2(l/B^j) = 1 on [2, lmax]
  int jm = 1;
  while (std::pow(B, jm) < lmax) ++jm;
  frame.j_max = jm;
  frame.window = build_window(B, jm);
  for (int j = frame.j_min; j <= frame.j_max; ++j) {
    const int band = std::max(2, static_cast<int>(std::ceil(std::pow(B, j + 1))));
    frame.grids.push_back(build_grid(band));
  }
  return frame;
}

namespace {

// band-pass: entries b(l/B^j) a_lm on the scale-j band, truncated at alm.lmax
Alm band_passed(const Alm& alm, const NeedletFrame& frame, int j) {
  const auto& win = frame.window;
  const double Bj = std::pow(win.B, j);
  const int hi = std::min(win.band_hi(j), alm.lmax);
  Alm out(hi);
  for (int l = win.band_lo(j); l <= hi; ++l) {
    const double w = win.b(l / Bj);
    if (w == 0.0) continue;
    for (int m = 0; m <= l; ++m) out.at(l, m) = w * alm.at(l, m);
  }
  return out;
}

void check_scale(const Alm& alm, const NeedletFrame& frame, int j) {
  if (j < frame.j_min || j > frame.j_max)
    throw std::invalid_argument("needlet scale j outside frame range");
  if (alm.lmax > frame.lmax)
    throw std::invalid_argument("alm band limit exceeds frame band limit");
  if (frame.window.band_lo(j) > alm.lmax)
    throw std::invalid_argument("needlet scale band lies above the alm band limit");
}

}  // namespace

NeedletCoeffs needlet_analyze(const Alm& alm, const NeedletFrame& frame, int j) {
  check_scale(alm, frame, j);
  const auto grid = frame.grids[j - frame.j_min];
  const SphereMap band_map = synthesize(band_passed(alm, frame, j), grid);
  NeedletCoeffs coeffs;
  coeffs.j = j;
  coeffs.beta.resize(grid->npix());
  for (int i = 0; i < grid->ntheta(); ++i) {
    const double sw = std::sqrt(grid->pixel_weight(i));
    for (int k = 0; k < grid->nphi; ++k) {
      const std::size_t p = grid->pix(i, k);
      coeffs.beta[p] = sw * band_map.values[p];
    }
  }
  return coeffs;
}

Alm needlet_synthesize(const std::vector<NeedletCoeffs>& coeffs, const NeedletFrame& frame) {
  std::vector<bool> seen(frame.j_max - frame.j_min + 1, false);
  Alm out(frame.lmax);
  for (const auto& c : coeffs) {
    if (c.j < frame.j_min || c.j > frame.j_max)
      throw std::invalid_argument("needlet_synthesize: coefficients at a scale outside the frame");
    seen[c.j - frame.j_min] = true;
    const auto grid = frame.grids[c.j - frame.j_min];
    if (c.beta.size() != grid->npix())
      throw std::invalid_argument("needlet_synthesize: coefficient count mismatch");
    SphereMap map(grid);
    for (int i = 0; i < grid->ntheta(); ++i) {
      const double sw = std::sqrt(grid->pixel_weight(i));
      for (int k = 0; k < grid->nphi; ++k) {
        const std::size_t p = grid->pix(i, k);
        map.values[p] = c.beta[p] / sw;
      }
    }
    const Alm proj = masked_projection(map, grid->lmax);
    const auto& win = frame.window;
    const double Bj = std::pow(win.B, c.j);
    const int hi = std::min({win.band_hi(c.j), grid->lmax, frame.lmax});
    for (int l = win.band_lo(c.j); l <= hi; ++l) {
      const double w = win.b(l / Bj);
      if (w == 0.0) continue;
      for (int m = 0; m <= l; ++m) out.at(l, m) += w * proj.at(l, m);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw std::invalid_argument("needlet_synthesize: missing scale j=" +
                                  std::to_string(frame.j_min + static_cast<int>(i)));
  return out;
}

NeedletPower needlet_power(const Alm& alm, const NeedletFrame& frame, int j,
                           const PowerSpectrum& cl) {
  NeedletCoeffs c = needlet_analyze(alm, frame, j);
  NeedletPower p;
  p.j = j;
  for (const double b : c.beta) p.gamma_hat += b * b;
  const auto& win = frame.window;
  const double Bj = std::pow(win.B, j);
  const int hi = std::min(win.band_hi(j), cl.lmax);
  for (int l = win.band_lo(j); l <= hi; ++l)
    p.gamma_expected += win.b2(l / Bj) * (2.0 * l + 1.0) * cl.at(l);
  return p;
}

}  // namespace spherestats
