#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alive/experiments/experiments.hpp"

namespace alive::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_variance(const std::vector<double>& y, std::size_t skip) {
  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (i != skip) {
      ++n;
      mean += (y[i] - mean) / static_cast<double>(n);
    }
  double ss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (i != skip) ss += (y[i] - mean) * (y[i] - mean);
  return ss / static_cast<double>(n - 1);
}

}  // namespace

double log_mean_exp(std::span<const double> xs) {
  double top = -std::numeric_limits<double>::infinity();
  std::size_t n = 0;
  for (double x : xs)
    if (!std::isnan(x)) {
      top = std::max(top, x);
      ++n;
    }
  if (n == 0) return kNaN;
  if (top == -std::numeric_limits<double>::infinity()) return top;
  double sum = 0.0;
  for (double x : xs)
    if (!std::isnan(x)) sum += std::exp(x - top);
  return top + std::log(sum / static_cast<double>(n));
}

RelativeVarianceSeries relative_variance_report(const std::vector<std::vector<double>>& log_estimates,
                                                std::span<const double> log_reference) {
  if (log_estimates.size() < 2) throw std::invalid_argument("relative_variance_report: need >= 2 replicates");
  const std::size_t steps = log_reference.size();
  for (const auto& row : log_estimates)
    if (row.size() != steps) throw std::invalid_argument("relative_variance_report: ragged input");

  RelativeVarianceSeries out;
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<double> logs;
    for (const auto& row : log_estimates)
      if (!std::isnan(row[k])) logs.push_back(row[k]);
    out.used.push_back(logs.size());
    const double top = logs.empty() ? kNaN : *std::max_element(logs.begin(), logs.end());
    if (logs.size() < 2 || !std::isfinite(top) || !std::isfinite(log_reference[k])) {
      out.rel_var.push_back(kNaN);
      out.log_rel_var.push_back(kNaN);
      out.jackknife_se.push_back(kNaN);
      continue;
    }
    // gamma_hat / ref = exp(l - top) * exp(top - ref)
    std::vector<double> y;
    y.reserve(logs.size());
    for (double l : logs) y.push_back(std::exp(l - top));
    const double log_scale2 = 2.0 * (top - log_reference[k]);
    const double v = sample_variance(y, y.size());
    out.log_rel_var.push_back(v > 0.0 ? log_scale2 + std::log(v) : -std::numeric_limits<double>::infinity());
    out.rel_var.push_back(v * std::exp(log_scale2));

    if (y.size() < 3) {
      out.jackknife_se.push_back(kNaN);
      continue;
    }
    const double n = static_cast<double>(y.size());
    std::vector<double> loo;
    loo.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) loo.push_back(sample_variance(y, i));
    double loo_mean = 0.0;
    for (double x : loo) loo_mean += x / n;
    double ss = 0.0;
    for (double x : loo) ss += (x - loo_mean) * (x - loo_mean);
    out.jackknife_se.push_back(std::sqrt((n - 1.0) / n * ss) * std::exp(log_scale2));
  }
  return out;
}

}  // namespace alive::experiments
