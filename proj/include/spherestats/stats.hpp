#pragma once

#include <functional>
#include <vector>

// Small statistics toolbox shared by the test harness and the estimators.
namespace spherestats::stats {

double normal_cdf(double x);
double chi_squared_cdf(int dof, double x);

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
// Asymptotic KS p-value with the Stephens small-sample correction.
double ks_pvalue(double d, std::size_t n);
// Two-sample KS statistic and p-value.
double ks_two_sample(std::vector<double> a, std::vector<double> b, double* pvalue = nullptr);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased
// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> v, double q);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis_excess = 0.0;
};
// Weighted central moments; weights need not be normalized.
Moments weighted_moments(const std::vector<double>& values, const std::vector<double>& weights);

}  // namespace spherestats::stats
