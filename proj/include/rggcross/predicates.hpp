#pragma once

namespace rggcross {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Sign of the orientation determinant of (a, b, c): +1 if c lies to the left
/// of the directed line a->b, -1 if to the right, 0 if collinear.
///
/// A floating-point filter settles almost every call; when the result is
/// within the rounding error bound the determinant is re-evaluated exactly
/// with a floating-point expansion, so the sign is always correct for finite
/// inputs that do not overflow.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

/// Exact-only path of orient2d, exposed for testing the filter.
int orient2d_exact(const Point2& a, const Point2& b, const Point2& c);

}  // namespace rggcross
