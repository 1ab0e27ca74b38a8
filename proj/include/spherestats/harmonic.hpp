#pragma once

#include <complex>
#include <vector>

// Special-function kernel: Legendre and associated Legendre, spherical
// harmonics and their partial derivatives, Wigner d/D matrices, Wigner 3j
// symbols and Gaunt integrals. All functions are pure and thread-safe.
namespace spherestats {

using cdouble = std::complex<double>;

// Colatitudes closer than this to a pole are rejected by the derivative
// evaluators. Grid nodes never touch the poles, so the cutoff only guards
// user-supplied points.
constexpr double kPolarCutoff = 1e-6;

// Validity limits (documented stability bounds, enforced).
constexpr int kMaxLegendreDegree = 512;
constexpr int kMaxWignerDDegree = 128;
// Exact rational 3j evaluation is used up to this degree, log-factorial
// floating evaluation beyond.
constexpr int kMaxExact3j = 20;

// Legendre polynomial P_l(x) by the three-term recurrence.
double legendre_p(int l, double x);
// Derivative P_l'(x), |x| < 1.
double legendre_p_deriv(int l, double x);

// Associated Legendre P_lm(x) with the Condon-Shortley factor (-1)^m.
// Evaluated through fully-normalized recurrences; valid to l = 512.
double assoc_legendre(int l, int m, double x);

// Fully normalized associated Legendre:
//   lambda_lm(x) = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_lm(x),  0 <= m <= l,
// so that Y_lm(theta,phi) = lambda_lm(cos theta) e^{i m phi}.
double legendre_norm(int l, int m, double x);

// Fill tab[idx] with lambda_lm(x) for all 0 <= m <= l <= lmax, where
// idx = l*(l+1)/2 + m. tab must have size (lmax+1)(lmax+2)/2.
void legendre_norm_table(int lmax, double x, double* tab);

inline std::size_t tri_index(int l, int m) {
  return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
}
inline std::size_t tri_size(int lmax) {
  return static_cast<std::size_t>(lmax + 1) * (lmax + 2) / 2;
}

// Spherical harmonic Y_lm(theta, phi); m may be negative
// (Y_{l,-m} = (-1)^m conj(Y_{lm})).
cdouble ylm(int l, int m, double theta, double phi);

struct YlmDerivs {
  cdouble d_theta;
  cdouble d_phi;
  cdouble d_theta_theta;
  cdouble d_theta_phi;
  cdouble d_phi_phi;
};

// Partial derivatives of Y_lm. First derivatives by the ladder formula
//   dY_lm/dtheta = 1/2 sqrt(l(l+1)-m(m+1)) Y_{l,m+1} e^{-i phi}
//               - 1/2 sqrt(l(l+1)-m(m-1)) Y_{l,m-1} e^{+i phi}
// and dY_lm/dphi = i m Y_lm; second derivatives by applying them twice.
// theta must lie in (kPolarCutoff, pi - kPolarCutoff).
YlmDerivs ylm_derivatives(int l, int m, double theta, double phi);

// Wigner small-d matrix d^l_{m'm}(beta), (2l+1)x(2l+1) row-major with
// index (m'+l)*(2l+1) + (m+l). Closed-form boundary rows plus the stable
// three-term degree recurrence; valid to l = 128.
std::vector<double> wigner_d(int l, double beta);

struct WignerDBlock {
  int l = 0;
  std::vector<cdouble> m;  // row-major, (2l+1)^2

  cdouble operator()(int mp, int mm) const {
    const int n = 2 * l + 1;
    return m[static_cast<std::size_t>(mp + l) * n + (mm + l)];
  }
};

// Wigner D matrix, D^l_{m'm}(alpha,beta,gamma) = e^{-i m' alpha}
// d^l_{m'm}(beta) e^{-i m gamma}. Unitary; D^l_{m0}(alpha,beta,.) =
// sqrt(4pi/(2l+1)) conj(Y_lm(beta, alpha)).
WignerDBlock wigner_D(int l, double alpha, double beta, double gamma);

// Wigner 3j symbol. Returns exact 0 when the selection rules fail.
// Dispatches to the exact rational evaluation for max(l) <= 20 and to the
// floating Racah sum beyond.
double wigner_3j(int l1, int l2, int l3, int m1, int m2, int m3);
// Both evaluation routes, exposed for cross-checking.
double wigner_3j_exact(int l1, int l2, int l3, int m1, int m2, int m3);
double wigner_3j_float(int l1, int l2, int l3, int m1, int m2, int m3);

// Gaunt integral of Y_{l1 m1} Y_{l2 m2} Y_{l3 m3} over the sphere.
double gaunt(int l1, int m1, int l2, int m2, int l3, int m3);

}  // namespace spherestats
