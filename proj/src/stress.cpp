#include "rggcross/stress.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace rggcross {
namespace {

// w (d0 - dL)^2 from squared distances.
inline double pair_term(double d0_sq, double dl_sq, WeightKind w) {
  if (w == WeightKind::InverseSquare) {
    if (d0_sq == 0.0) throw std::invalid_argument("stress: coincident points have no inverse-square weight");
    // dL <= d0 up to rounding; clamp keeps the term inside [0, 1].
    const double ratio = std::sqrt(std::min(1.0, dl_sq / d0_sq));
    const double gap = 1.0 - ratio;
    return gap * gap;
  }
  const double gap = std::sqrt(d0_sq) - std::sqrt(std::min(dl_sq, d0_sq));
  return gap * gap;
}

}  // namespace

WeightKind weight_from_name(const std::string& name) {
  if (name == "inverse_square") return WeightKind::InverseSquare;
  if (name == "unit") return WeightKind::Unit;
  throw std::invalid_argument(fmt::format("unknown weight '{}' (expected inverse_square or unit)", name));
}

std::string weight_name(WeightKind w) { return w == WeightKind::InverseSquare ? "inverse_square" : "unit"; }

double stress_term(std::span<const double> p, std::span<const double> q, const Plane2& plane, WeightKind w) {
  if (static_cast<int>(p.size()) != plane.dim() || q.size() != p.size()) {
    throw std::invalid_argument("stress_term: dimension mismatch");
  }
  double d0_sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) d0_sq += (p[k] - q[k]) * (p[k] - q[k]);
  if (d0_sq == 0.0) throw std::invalid_argument("stress_term: points coincide");
  const Point2 a = plane.project(p);
  const Point2 b = plane.project(q);
  const double dl_sq = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
  return pair_term(d0_sq, dl_sq, w);
}

double stress_of_projection(const PointSet& points, const Plane2& plane, WeightKind w) {
  if (points.dim() != plane.dim() && !points.empty()) throw std::invalid_argument("stress: dimension mismatch");
  const std::size_t n = points.size();
  const int d = points.dim();
  std::vector<Point2> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = plane.project(points[i]);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = points[i];
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto pj = points[j];
      double d0_sq = 0.0;
      for (int k = 0; k < d; ++k) d0_sq += (pi[k] - pj[k]) * (pi[k] - pj[k]);
      const double dx = proj[i].x - proj[j].x;
      const double dy = proj[i].y - proj[j].y;
      row += pair_term(d0_sq, dx * dx + dy * dy, w);
    }
    total += row;
  }
  return total;
}

double stress_of_projection(const GeometricGraph& g, const Plane2& plane, WeightKind w) {
  return stress_of_projection(g.points, plane, w);
}

}  // namespace rggcross
