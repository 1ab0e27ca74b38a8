#pragma once

#include <vector>

#include "spherestats/field_sim.hpp"
#include "spherestats/grid.hpp"

// Rotationally invariant bispectrum estimators I / I_hat and the integrated
// statistics J1 (squeezed) and J2 (equilateral).
namespace spherestats {

// true when (l1,l2,l3) satisfies the triangle conditions and l1+l2+l3 is even
bool bispectrum_admissible(int l1, int l2, int l3);

// I = (-1)^{(l1+l2+l3)/2} sum_{m1+m2+m3=0} (3j) a a a / sqrt(C1 C2 C3),
// 0 for inadmissible triples. cl supplies the C_l in the denominator.
double bispectrum_I(const Alm& alm, const PowerSpectrum& cl, int l1, int l2, int l3);

// studentized version: denominator uses the sample spectrum of alm
double bispectrum_I_hat(const Alm& alm, int l1, int l2, int l3);

struct IntegratedBispectrum {
  enum class Mode { Squeezed, Equilateral };
  Mode mode = Mode::Squeezed;
  int L = 0;
  int K = 0;              // offset count, squeezed mode only
  std::vector<double> r;  // l/L for l = 0..L
  std::vector<double> series;  // cumulative sum up to floor(L r)
};

// J1(r) = K^{-1/2} sum_{l2 <= floor(L r)} sum_{k=1..K} I_hat(l1_base + k, l2, l2)
IntegratedBispectrum integrated_J1(const Alm& alm, int L, int K, int l1_base = 2);

// J2(r) = sum_{l <= floor(L r)} I_hat(l, l, l)
IntegratedBispectrum integrated_J2(const Alm& alm, int L);

}  // namespace spherestats
