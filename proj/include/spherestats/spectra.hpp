#pragma once

#include <vector>

#include "spherestats/field_sim.hpp"
#include "spherestats/grid.hpp"

// Power spectrum estimation under ideal, noisy multi-channel and masked
// conditions, plus the Hausman misspecification test. Statistics start at
// l = 2 (monopole and dipole carry no information here).
namespace spherestats {

constexpr int kSpectrumLmin = 2;

enum class SpectrumKind { Raw, Auto, Cross };

struct SpectrumEstimate {
  int lmax = 0;
  std::vector<double> chat;  // per l, 0..lmax; entries below l=0 band as computed
  SpectrumKind kind = SpectrumKind::Raw;
};

// Chat_l = 1/(2l+1) sum_m |a_lm|^2, the m-sum over -l..l via reality.
SpectrumEstimate estimate_cl(const Alm& alm);

// Auto-power: mean over channels of (Chat_il - declared C_l^{N_i}).
SpectrumEstimate auto_power(const ChannelSet& channels);

// Cross-power: pair average of Re sum_m a_i conj(a_j) / (2l+1); unbiased
// regardless of the declared noise. Requires p >= 2.
SpectrumEstimate cross_power(const ChannelSet& channels);

struct HausmanSeries {
  int lmin = kSpectrumLmin;
  int lmax = 0;
  std::vector<double> h;          // H_l, index l - lmin
  std::vector<double> delta_var;  // Var{Ccp - Ca} per l

  double at(int l) const { return h[l - lmin]; }
};

// H_l = (Ccp_l - Ca_l) / sqrt(Var{Ccp_l - Ca_l}) with
//   Var = 2/(2l+1) [ (1/p^2) sum_i (C^N_i)^2
//                  + 2/(p^2 (p-1)^2) sum_{i<j} C^N_i C^N_j ],
// the prefactors chosen so that H_l has unit variance under the null for
// independent Gaussian channel noise (direct moment computation; the
// normalization is validated by Monte Carlo in the tests).
HausmanSeries hausman_statistic(const ChannelSet& channels,
                                const std::vector<PowerSpectrum>& declared_noise);

struct BrownianFunctional {
  std::vector<double> r;   // grid on [0, 1]
  std::vector<double> b;   // B_L(r)
  double ks = 0.0;         // sup_r |B_L(r)|
  double cvm = 0.0;        // trapezoid integral of B_L^2
};

// B_L(r) = n^{-1/2} sum over the first floor(n r) retained multipoles of
// H_l, with n = L - lmin + 1 retained terms (l = lmin..L).
BrownianFunctional brownian_functional(const HausmanSeries& h, int L);

// a^M_lm = cubature of T conj(Y_lm) over the observed pixels only.
Alm masked_alm(const SphereMap& map, int lmax);

struct MaskedCovariance {
  int lmax = 0;    // band limit of the covariance block
  int l_int = 0;   // truncation of the internal coupling sum
  // full-m indexing: idx(l,m) = l^2 + l + m, dimension (lmax+1)^2
  std::vector<cdouble> w;    // coupling integrals W_{lm, l1m1}, row = internal (l,m)
  std::vector<cdouble> cov;  // E a^M conj(a^M), (lmax+1)^2 square, row-major
  double tail_bound = 0.0;   // crude bound on the truncated tail of the l-sum

  static std::size_t full_index(int l, int m) {
    return static_cast<std::size_t>(l) * l + l + m;
  }
  std::size_t dim() const { return static_cast<std::size_t>(lmax + 1) * (lmax + 1); }
  cdouble cov_at(int l1, int m1, int l2, int m2) const {
    return cov[full_index(l1, m1) * dim() + full_index(l2, m2)];
  }
};

// Covariance of the masked coefficients, assembled from the coupling
// integrals with the internal l-sum truncated at l_int (default 2*lmax).
// Cost is (lmax+1)^4 * pixels; lmax <= 16 enforced.
MaskedCovariance coupling_covariance(const Mask& mask, int lmax, const PowerSpectrum& cl,
                                     int l_int = -1);

}  // namespace spherestats
