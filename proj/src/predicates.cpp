#include "rggcross/predicates.hpp"

#include <array>
#include <cmath>
#include <cstddef>

namespace rggcross {
namespace {

constexpr double kEpsilon = 0x1.0p-53;
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEpsilon) * kEpsilon;

// Knuth's two-sum: a + b == s + err exactly.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  err = (a - av) + (b - bv);
}

// a * b == p + err exactly (barring underflow).
inline void two_product(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

// Nonoverlapping expansion, components in increasing magnitude.
struct Expansion {
  std::array<double, 16> terms{};
  std::size_t size = 0;

  void grow(double b) {
    double q = b;
    std::size_t out = 0;
    for (std::size_t i = 0; i < size; ++i) {
      double s = 0.0;
      double h = 0.0;
      two_sum(q, terms[i], s, h);
      q = s;
      if (h != 0.0) terms[out++] = h;
    }
    if (q != 0.0) terms[out++] = q;
    size = out;
  }

  int sign() const {
    for (std::size_t i = size; i-- > 0;) {
      if (terms[i] > 0.0) return 1;
      if (terms[i] < 0.0) return -1;
    }
    return 0;
  }
};

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

int orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
  // (ax-cx)(by-cy) - (ay-cy)(bx-cx) expanded; the cx*cy terms cancel.
  const std::array<std::array<double, 3>, 6> products{{
      {a.x, b.y, 1.0},
      {a.x, c.y, -1.0},
      {c.x, b.y, -1.0},
      {a.y, b.x, -1.0},
      {a.y, c.x, 1.0},
      {c.y, b.x, 1.0},
  }};
  Expansion e;
  for (const auto& t : products) {
    double p = 0.0;
    double err = 0.0;
    two_product(t[0], t[1], p, err);
    e.grow(t[2] * p);
    e.grow(t[2] * err);
  }
  return e.sign();
}

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;

  double detsum = 0.0;
  if (detleft > 0.0) {
    if (detright <= 0.0) return sign_of(det);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return sign_of(det);
    detsum = -detleft - detright;
  } else {
    return sign_of(det);
  }

  const double errbound = kCcwErrBoundA * detsum;
  if (det >= errbound || -det >= errbound) return sign_of(det);
  return orient2d_exact(a, b, c);
}

}  // namespace rggcross
