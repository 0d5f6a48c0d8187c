#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace alive::test {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se = 0.0;        // of the mean
  std::size_t n = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - m;
    m += d / static_cast<double>(i + 1);
    m2 += d * (xs[i] - m);
  }
  s.mean = m;
  s.variance = s.n > 1 ? m2 / static_cast<double>(s.n - 1) : 0.0;
  s.se = s.n > 1 ? std::sqrt(s.variance / static_cast<double>(s.n)) : 0.0;
  return s;
}

/// Pearson chi-square p-value for counts against equal expected frequencies.
inline double chi_square_uniform_pvalue(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Asymptotic Kolmogorov-Smirnov critical coefficient c(alpha) = sqrt(-ln(alpha / 2) / 2).
inline double ks_coefficient(double alpha) { return std::sqrt(-std::log(alpha / 2.0) / 2.0); }

inline double ks_two_sample_stat(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha) {
  const double a = static_cast<double>(n1), b = static_cast<double>(n2);
  return ks_coefficient(alpha) * std::sqrt((a + b) / (a * b));
}

inline double ks_one_sample_stat(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Anderson-Darling A^2 against a fully specified continuous cdf.
inline double anderson_darling(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::clamp(cdf(xs[i]), 1e-300, 1.0 - 1e-16);
    const double hi = std::clamp(cdf(xs[n - 1 - i]), 1e-300, 1.0 - 1e-16);
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log1p(-hi));
  }
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

/// Upper 0.1% point of A^2 for a fully specified null (Marsaglia & Marsaglia tables).
inline constexpr double kAndersonDarlingCritical001 = 5.97;

}  // namespace alive::test
