#pragma once

// Small statistics toolkit: sample moments, Kolmogorov-Smirnov against a
// reference CDF, jackknife errors. All reductions are fixed-order.

#include <cstddef>
#include <functional>
#include <vector>

namespace wavelab {

struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_mean = 0.0;
  double se_skewness = 0.0;  // sqrt(6/n)
  double se_kurtosis = 0.0;  // sqrt(24/n)
};
MomentSummary moments(const std::vector<double>& x);

double normal_cdf(double x);  // standard normal

// two-sided KS distance of the sample against cdf
double ks_statistic(const std::vector<double>& x, const std::function<double(double)>& cdf);
// asymptotic Kolmogorov tail with the Stephens small-sample correction
double ks_pvalue(double d, std::size_t n);

// mean of exp(i x_m) with jackknife standard error of the complex mean
struct ComplexMean {
  double re = 0.0, im = 0.0;
  double se = 0.0;  // sqrt(se_re^2 + se_im^2)
};
ComplexMean circular_mean(const std::vector<double>& x);

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wavelab
