#pragma once

#include <cmath>
#include <cstdint>

namespace rggcross {

/// Monte Carlo estimate with its standard error (sample std / sqrt(n)).
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

/// Streaming mean/variance (Welford), mergeable in a fixed order so that
/// block-parallel estimators are reproducible bit-for-bit.
class MeanAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const MeanAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double d = o.mean_ - mean_;
    mean_ += d * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

  McEstimate estimate(double scale = 1.0) const {
    return {scale * mean(), std::abs(scale) * std_error(), n_};
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace rggcross
