#include "spherestats/harmonic.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spherestats {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// pow with the convention 0^0 = 1, needed at beta = 0 or pi.
double powi(double base, int e) {
  if (e == 0) return 1.0;
  return std::pow(base, e);
}

void check_lm(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("harmonic: invalid (l,m)");
}

bool triangle_ok(int l1, int l2, int l3) {
  return l3 >= std::abs(l1 - l2) && l3 <= l1 + l2;
}

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

bigint big_factorial(int n) {
  bigint r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

double legendre_p(int l, double x) {
  if (l < 0) throw std::domain_error("legendre_p: l < 0");
  if (std::abs(x) > 1.0) throw std::domain_error("legendre_p: |x| > 1");
  if (l == 0) return 1.0;
  double pm2 = 1.0, pm1 = x;
  for (int k = 2; k <= l; ++k) {
    const double p = ((2 * k - 1) * x * pm1 - (k - 1) * pm2) / k;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

double legendre_p_deriv(int l, double x) {
  if (l == 0) return 0.0;
  // (1-x^2) P_l' = l (P_{l-1} - x P_l)
  const double d = 1.0 - x * x;
  if (d <= 0.0) throw std::domain_error("legendre_p_deriv: |x| = 1");
  return l * (legendre_p(l - 1, x) - x * legendre_p(l, x)) / d;
}

void legendre_norm_table(int lmax, double x, double* tab) {
  if (lmax > kMaxLegendreDegree)
    throw std::domain_error("legendre_norm_table: l beyond documented limit");
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  // lambda_mm, climbing the diagonal; the minus sign carries Condon-Shortley.
  double diag = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= lmax; ++m) {
    tab[tri_index(m, m)] = diag;
    if (m + 1 <= lmax) {
      tab[tri_index(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * diag;
      for (int l = m + 2; l <= lmax; ++l) {
        const double a =
            std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double b = std::sqrt(((static_cast<double>(l - 1) * (l - 1)) - static_cast<double>(m) * m) /
                                   (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
        tab[tri_index(l, m)] = a * (x * tab[tri_index(l - 1, m)] - b * tab[tri_index(l - 2, m)]);
      }
    }
    diag *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * s;
  }
}

double legendre_norm(int l, int m, double x) {
  check_lm(l, m);
  if (m < 0) throw std::domain_error("legendre_norm: m < 0");
  if (std::abs(x) > 1.0) throw std::domain_error("legendre_norm: |x| > 1");
  std::vector<double> tab(tri_size(l));
  legendre_norm_table(l, x, tab.data());
  return tab[tri_index(l, m)];
}

double assoc_legendre(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) throw std::domain_error("assoc_legendre: invalid (l,m)");
  if (std::abs(x) > 1.0) throw std::domain_error("assoc_legendre: |x| > 1");
  const double lam = legendre_norm(l, m, x);
  const double lognorm =
      0.5 * (std::log((2.0 * l + 1.0) / (4.0 * kPi)) + log_factorial(l - m) - log_factorial(l + m));
  return lam / std::exp(lognorm);
}

cdouble ylm(int l, int m, double theta, double phi) {
  check_lm(l, m);
  const int am = std::abs(m);
  const double lam = legendre_norm(l, am, std::cos(theta));
  const cdouble y = lam * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

namespace {

// theta-derivative of Y_lm by the ladder formula; uses precomputed table of
// lambda at cos(theta) so repeated calls share work.
cdouble dtheta_ylm(int l, int m, const double* lam, double phi) {
  auto y_of = [&](int mm) -> cdouble {
    if (std::abs(mm) > l) return {0.0, 0.0};
    const int am = std::abs(mm);
    const cdouble y = lam[tri_index(l, am)] * std::polar(1.0, am * phi);
    if (mm >= 0) return y;
    return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
  };
  const double cp = std::sqrt(std::max(0.0, static_cast<double>(l) * (l + 1) - static_cast<double>(m) * (m + 1)));
  const double cm = std::sqrt(std::max(0.0, static_cast<double>(l) * (l + 1) - static_cast<double>(m) * (m - 1)));
  const cdouble em = std::polar(1.0, -phi);
  const cdouble ep = std::polar(1.0, phi);
  return 0.5 * cp * y_of(m + 1) * em - 0.5 * cm * y_of(m - 1) * ep;
}

}  // namespace

YlmDerivs ylm_derivatives(int l, int m, double theta, double phi) {
  check_lm(l, m);
  if (theta < kPolarCutoff || theta > kPi - kPolarCutoff)
    throw std::domain_error("ylm_derivatives: theta inside polar cap");
  std::vector<double> lam(tri_size(l + 1));
  legendre_norm_table(l + 1, std::cos(theta), lam.data());

  const cdouble y = ylm(l, m, theta, phi);
  YlmDerivs d;
  d.d_phi = cdouble(0.0, 1.0) * static_cast<double>(m) * y;
  d.d_phi_phi = -static_cast<double>(m) * static_cast<double>(m) * y;
  d.d_theta = dtheta_ylm(l, m, lam.data(), phi);
  // d/dphi of the theta-ladder reproduces i m in front of it.
  d.d_theta_phi = cdouble(0.0, 1.0) * static_cast<double>(m) * d.d_theta;
  // Apply the ladder to each term of d_theta.
  const double cp = std::sqrt(std::max(0.0, static_cast<double>(l) * (l + 1) - static_cast<double>(m) * (m + 1)));
  const double cm = std::sqrt(std::max(0.0, static_cast<double>(l) * (l + 1) - static_cast<double>(m) * (m - 1)));
  const cdouble em = std::polar(1.0, -phi);
  const cdouble ep = std::polar(1.0, phi);
  d.d_theta_theta = 0.5 * cp * dtheta_ylm(l, m + 1, lam.data(), phi) * em -
                    0.5 * cm * dtheta_ylm(l, m - 1, lam.data(), phi) * ep;
  return d;
}

std::vector<double> wigner_d(int l, double beta) {
  if (l < 0) throw std::domain_error("wigner_d: l < 0");
  if (l > kMaxWignerDDegree) throw std::domain_error("wigner_d: l beyond documented limit");
  if (beta < 0.0 || beta > kPi) throw std::domain_error("wigner_d: beta outside [0, pi]");
  // Degree recurrence: the rows m' = +-l come from the closed form
  // d^l_{l,m} = sqrt(C(2l, l+m)) cos^{l+m}(b/2) (-sin(b/2))^{l-m}, the
  // columns m = +-l from the transpose symmetry, and the interior from the
  // three-term recurrence in l. Stable for the full documented range, unlike
  // the alternating factorial sum.
  const double cb = std::cos(beta);
  const double ch = std::cos(0.5 * beta);
  const double sh = std::sin(0.5 * beta);
  std::vector<double> dm2, dm1 = {1.0};
  if (l == 0) return dm1;
  for (int ll = 1; ll <= l; ++ll) {
    const int n = 2 * ll + 1;
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int mp, int mm) -> double& {
      return d[static_cast<std::size_t>(mp + ll) * n + (mm + ll)];
    };
    double binom = 1.0;  // C(2 ll, ll + m), updated multiplicatively
    for (int m = -ll; m <= ll; ++m) {
      double v = std::sqrt(binom) * std::pow(ch, ll + m) * std::pow(sh, ll - m);
      if ((ll - m) % 2 != 0) v = -v;
      at(ll, m) = v;
      binom = binom * (ll - m) / (ll + m + 1.0);
    }
    for (int m = -ll; m <= ll; ++m)
      at(-ll, m) = ((ll + m) % 2 != 0 ? -1.0 : 1.0) * at(ll, -m);
    for (int mp = -ll + 1; mp < ll; ++mp) {
      const double sign = (mp + ll) % 2 != 0 ? -1.0 : 1.0;
      at(mp, ll) = sign * at(ll, mp);
      at(mp, -ll) = sign * at(-ll, mp);
    }
    const int nm1 = 2 * ll - 1, nm2 = 2 * ll - 3;
    auto prev = [&](int mp, int mm) {
      return dm1[static_cast<std::size_t>(mp + ll - 1) * nm1 + (mm + ll - 1)];
    };
    auto prev2 = [&](int mp, int mm) -> double {
      if (std::abs(mp) > ll - 2 || std::abs(mm) > ll - 2) return 0.0;
      return dm2[static_cast<std::size_t>(mp + ll - 2) * nm2 + (mm + ll - 2)];
    };
    for (int mp = -ll + 1; mp <= ll - 1; ++mp)
      for (int mm = -ll + 1; mm <= ll - 1; ++mm) {
        const double f = ll * (2.0 * ll - 1.0) /
                         std::sqrt(static_cast<double>(ll * ll - mp * mp) * (ll * ll - mm * mm));
        const double a =
            cb - (mp * mm == 0 ? 0.0 : static_cast<double>(mp) * mm / (ll * (ll - 1.0)));
        const double b =
            ll > 1 ? std::sqrt(static_cast<double>((ll - 1) * (ll - 1) - mp * mp) *
                               ((ll - 1) * (ll - 1) - mm * mm)) /
                         ((ll - 1.0) * (2.0 * ll - 1.0))
                   : 0.0;
        at(mp, mm) = f * (a * prev(mp, mm) - b * prev2(mp, mm));
      }
    dm2 = std::move(dm1);
    dm1 = std::move(d);
  }
  return dm1;
}

WignerDBlock wigner_D(int l, double alpha, double beta, double gamma) {
  const std::vector<double> d = wigner_d(l, beta);
  const int n = 2 * l + 1;
  WignerDBlock D;
  D.l = l;
  D.m.resize(static_cast<std::size_t>(n) * n);
  for (int mp = -l; mp <= l; ++mp) {
    const cdouble ea = std::polar(1.0, -mp * alpha);
    for (int mm = -l; mm <= l; ++mm) {
      const cdouble eg = std::polar(1.0, -mm * gamma);
      D.m[static_cast<std::size_t>(mp + l) * n + (mm + l)] =
          ea * d[static_cast<std::size_t>(mp + l) * n + (mm + l)] * eg;
    }
  }
  return D;
}

namespace {

bool selection_ok(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return false;
  if (m1 + m2 + m3 != 0) return false;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(m3) > l3) return false;
  return triangle_ok(l1, l2, l3);
}

}  // namespace

double wigner_3j_exact(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (!selection_ok(l1, l2, l3, m1, m2, m3)) return 0.0;
  // Racah single-sum with exact integer factorials.
  const bigrat delta =
      bigrat(big_factorial(l1 + l2 - l3) * big_factorial(l1 - l2 + l3) *
                 big_factorial(-l1 + l2 + l3),
             big_factorial(l1 + l2 + l3 + 1));
  const bigint mfac = big_factorial(l1 + m1) * big_factorial(l1 - m1) *
                      big_factorial(l2 + m2) * big_factorial(l2 - m2) *
                      big_factorial(l3 + m3) * big_factorial(l3 - m3);
  const int tmin = std::max({0, l2 - l3 - m1, l1 - l3 + m2});
  const int tmax = std::min({l1 + l2 - l3, l1 - m1, l2 + m2});
  bigrat sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    const bigint den = big_factorial(t) * big_factorial(l3 - l2 + t + m1) *
                       big_factorial(l3 - l1 + t - m2) *
                       big_factorial(l1 + l2 - l3 - t) *
                       big_factorial(l1 - t - m1) * big_factorial(l2 - t + m2);
    bigrat term(1, den);
    if (t % 2 != 0) term = -term;
    sum += term;
  }
  const double root = std::sqrt((delta * bigrat(mfac)).convert_to<double>());
  double v = sum.convert_to<double>() * root;
  if ((l1 - l2 - m3) % 2 != 0) v = -v;
  return v;
}

double wigner_3j_float(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (!selection_ok(l1, l2, l3, m1, m2, m3)) return 0.0;
  if (m1 == 0 && m2 == 0 && m3 == 0 && (l1 + l2 + l3) % 2 != 0) return 0.0;
  const double logdelta =
      log_factorial(l1 + l2 - l3) + log_factorial(l1 - l2 + l3) +
      log_factorial(-l1 + l2 + l3) - log_factorial(l1 + l2 + l3 + 1);
  const double logm = log_factorial(l1 + m1) + log_factorial(l1 - m1) +
                      log_factorial(l2 + m2) + log_factorial(l2 - m2) +
                      log_factorial(l3 + m3) + log_factorial(l3 - m3);
  const double logroot = 0.5 * (logdelta + logm);
  const int tmin = std::max({0, l2 - l3 - m1, l1 - l3 + m2});
  const int tmax = std::min({l1 + l2 - l3, l1 - m1, l2 + m2});
  // factor out the largest term to keep the alternating sum in range
  double logmax = -1e308;
  for (int t = tmin; t <= tmax; ++t) {
    const double ld = log_factorial(t) + log_factorial(l3 - l2 + t + m1) +
                      log_factorial(l3 - l1 + t - m2) +
                      log_factorial(l1 + l2 - l3 - t) +
                      log_factorial(l1 - t - m1) + log_factorial(l2 - t + m2);
    logmax = std::max(logmax, -ld);
  }
  double sum = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    const double ld = log_factorial(t) + log_factorial(l3 - l2 + t + m1) +
                      log_factorial(l3 - l1 + t - m2) +
                      log_factorial(l1 + l2 - l3 - t) +
                      log_factorial(l1 - t - m1) + log_factorial(l2 - t + m2);
    double term = std::exp(-ld - logmax);
    if (t % 2 != 0) term = -term;
    sum += term;
  }
  double v = sum * std::exp(logroot + logmax);
  if ((l1 - l2 - m3) % 2 != 0) v = -v;
  return v;
}

double wigner_3j(int l1, int l2, int l3, int m1, int m2, int m3) {
  if (std::max({l1, l2, l3}) <= kMaxExact3j)
    return wigner_3j_exact(l1, l2, l3, m1, m2, m3);
  return wigner_3j_float(l1, l2, l3, m1, m2, m3);
}

double gaunt(int l1, int m1, int l2, int m2, int l3, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (!triangle_ok(l1, l2, l3)) return 0.0;
  const double pref = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * l3 + 1.0) / (4.0 * kPi));
  return pref * wigner_3j(l1, l2, l3, 0, 0, 0) * wigner_3j(l1, l2, l3, m1, m2, m3);
}

}  // namespace spherestats
