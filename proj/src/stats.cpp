#include "rggcross/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace rggcross::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size() - 1);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: size mismatch");
  if (x.size() < 2) return 0.0;
  const double mx = mean(x);
  const double my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double vx = variance(x);
  const double vy = variance(y);
  if (!(vx > 0.0) || !(vy > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double r = covariance(x, y) / std::sqrt(vx * vy);
  return std::clamp(r, -1.0, 1.0);
}

double student_t_quantile(double confidence, double dof) {
  if (!(dof > 0.0)) return std::numeric_limits<double>::infinity();
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence);
}

namespace {

template <class BatchStat>
Interval batch_interval(std::span<const double> x, std::size_t batches, double confidence, double point,
                        BatchStat stat) {
  const std::size_t n = x.size();
  batches = std::min(batches, n);
  if (batches < 2) return {point, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::vector<double> values;
  values.reserve(batches);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t size = n / batches + (b < n % batches ? 1 : 0);
    values.push_back(stat(x.subspan(begin, size)));
    begin += size;
  }
  const double center = mean(values);
  const double se = std::sqrt(variance(values) / static_cast<double>(batches));
  const double q = student_t_quantile(confidence, static_cast<double>(batches - 1));
  return {point, center - q * se, center + q * se};
}

}  // namespace

Interval batch_means_ci(std::span<const double> x, std::size_t batches, double confidence) {
  return batch_interval(x, batches, confidence, mean(x), [](std::span<const double> b) { return mean(b); });
}

Interval batch_variance_ci(std::span<const double> x, std::size_t batches, double confidence) {
  // A batch needs two values for a sample variance.
  return batch_interval(x, std::min(batches, x.size() / 2), confidence, variance(x),
                        [](std::span<const double> b) { return variance(b); });
}

double fisher_z_p_value(double r, std::size_t n) {
  if (std::isnan(r) || n < 4) return std::numeric_limits<double>::quiet_NaN();
  if (r >= 1.0) return 0.0;
  if (r <= -1.0) return 1.0;
  const double z = std::atanh(r) * std::sqrt(static_cast<double>(n) - 3.0);
  return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(), z));
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ols: need two or more paired values");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_std_error = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return fit;
}

}  // namespace rggcross::stats
