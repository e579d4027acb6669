#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rggcross::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than 2 values.
double variance(std::span<const double> x);
double covariance(std::span<const double> x, std::span<const double> y);
/// Pearson correlation; NaN when either sample has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct Interval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double half_width() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Two-sided Student-t quantile t_{1 - alpha/2, dof}.
double student_t_quantile(double confidence, double dof);

/// Batch-means confidence interval for the mean: the sample is cut into
/// `batches` contiguous batches (sizes differ by at most one) and a Student-t
/// interval is formed from the batch means.
Interval batch_means_ci(std::span<const double> x, std::size_t batches = 20, double confidence = 0.95);

/// Same construction for the variance: per-batch sample variances.
Interval batch_variance_ci(std::span<const double> x, std::size_t batches = 20, double confidence = 0.95);

/// One-sided p-value of H0: rho <= 0 against rho > 0 via Fisher's z.
double fisher_z_p_value(double r, std::size_t n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace rggcross::stats
