#include "wavelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavelab/util.hpp"

namespace wavelab {

MomentSummary moments(const std::vector<double>& x) {
  MomentSummary m;
  m.n = x.size();
  if (m.n == 0) return m;
  m.mean = pairwise_sum(x) / m.n;
  std::vector<double> p2(m.n), p3(m.n), p4(m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    const double d = x[i] - m.mean;
    p2[i] = d * d;
    p3[i] = d * d * d;
    p4[i] = d * d * d * d;
  }
  const double m2 = pairwise_sum(p2) / m.n;
  const double m3 = pairwise_sum(p3) / m.n;
  const double m4 = pairwise_sum(p4) / m.n;
  m.var = m.n > 1 ? m2 * m.n / (m.n - 1) : 0.0;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  m.se_mean = m.n > 1 ? std::sqrt(m.var / m.n) : 0.0;
  m.se_skewness = std::sqrt(6.0 / m.n);
  m.se_kurtosis = std::sqrt(24.0 / m.n);
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(const std::vector<double>& x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> s = x;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max(d, std::abs(f - (i + 1) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 1e-3) return 1.0;
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

ComplexMean circular_mean(const std::vector<double>& x) {
  ComplexMean cm;
  const std::size_t n = x.size();
  if (n == 0) return cm;
  std::vector<double> cr(n), ci(n);
  for (std::size_t i = 0; i < n; ++i) {
    cr[i] = std::cos(x[i]);
    ci[i] = std::sin(x[i]);
  }
  const double sr = pairwise_sum(cr), si = pairwise_sum(ci);
  cm.re = sr / n;
  cm.im = si / n;
  if (n > 1) {
    // jackknife over leave-one-out means
    double vr = 0.0, vi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double jr = (sr - cr[i]) / (n - 1) - cm.re;
      const double ji = (si - ci[i]) / (n - 1) - cm.im;
      vr += jr * jr;
      vi += ji * ji;
    }
    const double f = static_cast<double>(n - 1) / n;
    cm.se = std::sqrt(f * (vr + vi));
  }
  return cm;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: bad input");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double sst = syy - sy * sy / n;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return f;
}

}  // namespace wavelab
