#include "spherestats/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spherestats::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

double chi_squared_cdf(int dof, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

namespace {

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda) {
  if (lambda < 1e-10) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

}  // namespace

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b, double* pvalue) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < na && j < nb) {
    const double x = std::min(a[i], b[j]);
    while (i < na && a[i] <= x) ++i;
    while (j < nb && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  if (pvalue) {
    const double ne = static_cast<double>(na) * nb / (na + nb);
    const double sn = std::sqrt(ne);
    *pvalue = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  }
  return d;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  if (q <= 0.0) return v.front();
  if (q >= 1.0) return v.back();
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

Moments weighted_moments(const std::vector<double>& values, const std::vector<double>& weights) {
  if (values.size() != weights.size() || values.empty())
    throw std::invalid_argument("weighted_moments: bad input");
  double wsum = 0.0, m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    wsum += weights[i];
    m += weights[i] * values[i];
  }
  if (wsum <= 0.0) throw std::invalid_argument("weighted_moments: nonpositive weight sum");
  m /= wsum;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - m;
    m2 += weights[i] * d * d;
    m3 += weights[i] * d * d * d;
    m4 += weights[i] * d * d * d * d;
  }
  m2 /= wsum;
  m3 /= wsum;
  m4 /= wsum;
  if (m2 <= 0.0) throw std::invalid_argument("weighted_moments: zero variance");
  Moments out;
  out.mean = m;
  out.variance = m2;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis_excess = m4 / (m2 * m2) - 3.0;
  return out;
}

}  // namespace spherestats::stats
