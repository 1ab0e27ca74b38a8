#include "spherestats/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

SpectrumEstimate estimate_cl(const Alm& alm) {
  SpectrumEstimate est;
  est.lmax = alm.lmax;
  est.kind = SpectrumKind::Raw;
  est.chat.resize(alm.lmax + 1, 0.0);
  for (int l = 0; l <= alm.lmax; ++l) {
    double s = std::norm(alm.at(l, 0));
    for (int m = 1; m <= l; ++m) s += 2.0 * std::norm(alm.at(l, m));
    est.chat[l] = s / (2.0 * l + 1.0);
  }
  return est;
}

SpectrumEstimate auto_power(const ChannelSet& channels) {
  const int p = channels.p();
  if (p < 1) throw std::invalid_argument("auto_power: no channels");
  if (static_cast<int>(channels.noise_spectra.size()) != p)
    throw std::invalid_argument("auto_power: declared noise spectra missing");
  const int lmax = channels.lmax();
  SpectrumEstimate est;
  est.lmax = lmax;
  est.kind = SpectrumKind::Auto;
  est.chat.resize(lmax + 1, 0.0);
  for (int i = 0; i < p; ++i) {
    if (channels.alms[i].lmax != lmax || channels.noise_spectra[i].lmax != lmax)
      throw std::invalid_argument("auto_power: band limit mismatch");
    const SpectrumEstimate raw = estimate_cl(channels.alms[i]);
    for (int l = 0; l <= lmax; ++l)
      est.chat[l] += (raw.chat[l] - channels.noise_spectra[i].at(l)) / p;
  }
  return est;
}

SpectrumEstimate cross_power(const ChannelSet& channels) {
  const int p = channels.p();
  if (p < 2) throw std::invalid_argument("cross_power: needs p >= 2 channels");
  const int lmax = channels.lmax();
  SpectrumEstimate est;
  est.lmax = lmax;
  est.kind = SpectrumKind::Cross;
  est.chat.resize(lmax + 1, 0.0);
  const double norm = 2.0 / (static_cast<double>(p) * (p - 1));
  for (int i = 0; i < p - 1; ++i)
    for (int j = i + 1; j < p; ++j) {
      const Alm& a = channels.alms[i];
      const Alm& b = channels.alms[j];
      for (int l = 0; l <= lmax; ++l) {
        double s = (a.at(l, 0) * std::conj(b.at(l, 0))).real();
        for (int m = 1; m <= l; ++m) s += 2.0 * (a.at(l, m) * std::conj(b.at(l, m))).real();
        est.chat[l] += norm * s / (2.0 * l + 1.0);
      }
    }
  return est;
}

HausmanSeries hausman_statistic(const ChannelSet& channels,
                                const std::vector<PowerSpectrum>& declared_noise) {
  const int p = channels.p();
  if (p < 2) throw std::invalid_argument("hausman_statistic: needs p >= 2 channels");
  if (static_cast<int>(declared_noise.size()) != p)
    throw std::invalid_argument("hausman_statistic: one declared spectrum per channel required");
  const int lmax = channels.lmax();
  ChannelSet declared = channels;
  declared.noise_spectra = declared_noise;
  const SpectrumEstimate ca = auto_power(declared);
  const SpectrumEstimate ccp = cross_power(channels);

  HausmanSeries series;
  series.lmin = kSpectrumLmin;
  series.lmax = lmax;
  series.h.resize(lmax - series.lmin + 1, 0.0);
  series.delta_var.resize(lmax - series.lmin + 1, 0.0);
  const double p2 = static_cast<double>(p) * p;
  for (int l = series.lmin; l <= lmax; ++l) {
    double sq = 0.0, cross = 0.0;
    for (int i = 0; i < p; ++i) {
      const double ci = declared_noise[i].at(l);
      sq += ci * ci;
      for (int j = i + 1; j < p; ++j) cross += ci * declared_noise[j].at(l);
    }
    const double var =
        2.0 / (2.0 * l + 1.0) * (sq / p2 + 2.0 * cross / (p2 * (p - 1.0) * (p - 1.0)));
    if (var <= 0.0)
      throw std::invalid_argument("hausman_statistic: declared noise gives zero variance at l=" +
                                  std::to_string(l));
    series.delta_var[l - series.lmin] = var;
    series.h[l - series.lmin] = (ccp.chat[l] - ca.chat[l]) / std::sqrt(var);
  }
  return series;
}

BrownianFunctional brownian_functional(const HausmanSeries& h, int L) {
  if (L < h.lmin || L > h.lmax) throw std::invalid_argument("brownian_functional: L out of range");
  const int n = L - h.lmin + 1;
  BrownianFunctional out;
  out.r.resize(n + 1);
  out.b.resize(n + 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  double acc = 0.0;
  out.r[0] = 0.0;
  out.b[0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += h.h[k - 1];
    out.r[k] = static_cast<double>(k) / n;
    out.b[k] = scale * acc;
  }
  for (const double v : out.b) out.ks = std::max(out.ks, std::abs(v));
  for (int k = 0; k < n; ++k)
    out.cvm += 0.5 * (out.b[k] * out.b[k] + out.b[k + 1] * out.b[k + 1]) * (out.r[k + 1] - out.r[k]);
  return out;
}

Alm masked_alm(const SphereMap& map, int lmax) {
  if (map.n_masked() == map.grid->npix()) throw std::invalid_argument("masked_alm: fully masked sky");
  return masked_projection(map, lmax);
}

MaskedCovariance coupling_covariance(const Mask& mask, int lmax, const PowerSpectrum& cl,
                                     int l_int) {
  if (lmax > 16) throw std::invalid_argument("coupling_covariance: lmax > 16 unsupported (cost)");
  if (l_int < 0) l_int = 2 * lmax;
  if (cl.lmax < l_int)
    throw std::invalid_argument("coupling_covariance: spectrum does not cover internal sum");

  MaskedCovariance mc;
  mc.lmax = lmax;
  mc.l_int = l_int;
  const std::size_t dim = mc.dim();
  const std::size_t dim_int = static_cast<std::size_t>(l_int + 1) * (l_int + 1);

  // W_{lm, l1m1} = integral over the observed region of Y_lm conj(Y_l1m1):
  // one masked cubature on a grid exact for the products.
  const auto grid = build_grid(std::max(l_int, 2));
  mc.w.assign(dim_int * dim, cdouble(0.0, 0.0));
  std::vector<cdouble> y_int(dim_int), y_out(dim);
  for (int i = 0; i < grid->ntheta(); ++i) {
    const double* lam_tab = grid->legendre_row(i);
    for (int j = 0; j < grid->nphi; ++j) {
      if (mask.masks(*grid, i, j)) continue;
      const double w = grid->pixel_weight(i);
      const double phi = grid->phi(j);
      auto fill = [&](int lm, std::vector<cdouble>& y) {
        for (int l = 0; l <= lm; ++l)
          for (int m = -l; m <= l; ++m) {
            const int am = std::abs(m);
            const cdouble v = lam_tab[tri_index(l, am)] * std::polar(1.0, am * phi);
            y[MaskedCovariance::full_index(l, m)] =
                (m >= 0) ? v : ((am % 2 == 0 ? 1.0 : -1.0) * std::conj(v));
          }
      };
      fill(l_int, y_int);
      fill(lmax, y_out);
      for (std::size_t a = 0; a < dim_int; ++a) {
        const cdouble wy = w * y_int[a];
        for (std::size_t b = 0; b < dim; ++b) mc.w[a * dim + b] += wy * std::conj(y_out[b]);
      }
    }
  }

  // cov_{(l1m1),(l2m2)} = sum_{lm} C_l W_{lm,l1m1} conj(W_{lm,l2m2})
  mc.cov.assign(dim * dim, cdouble(0.0, 0.0));
  for (int l = 0; l <= l_int; ++l) {
    const double c = cl.at(l);
    if (c == 0.0) continue;
    for (int m = -l; m <= l; ++m) {
      const cdouble* row = mc.w.data() + MaskedCovariance::full_index(l, m) * dim;
      for (std::size_t a = 0; a < dim; ++a) {
        const cdouble ca = c * row[a];
        for (std::size_t b = 0; b < dim; ++b) mc.cov[a * dim + b] += ca * std::conj(row[b]);
      }
    }
  }

  mc.tail_bound = 0.0;
  for (int l = l_int + 1; l <= cl.lmax; ++l)
    mc.tail_bound += (2.0 * l + 1.0) * cl.at(l) / (4.0 * kPi);
  return mc;
}

}  // namespace spherestats
