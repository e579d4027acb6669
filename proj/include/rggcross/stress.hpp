#pragma once

#include <span>
#include <string>

#include "rggcross/geometry.hpp"
#include "rggcross/pointprocess.hpp"

namespace rggcross {

enum class WeightKind {
  InverseSquare,  // w = d_0^-2
  Unit,           // w = 1
};

WeightKind weight_from_name(const std::string& name);
std::string weight_name(WeightKind w);

/// w(p, q) (d_0 - d_L)^2 for one unordered pair, d_0 = |p - q| in R^d and
/// d_L the distance of the projections. Throws if p == q.
double stress_term(std::span<const double> p, std::span<const double> q, const Plane2& plane, WeightKind w);

/// Metric stress of the projection, summed over all unordered vertex pairs
/// (not only edges). Rows are summed in fixed order, so the value is
/// reproducible. Throws on coincident points under InverseSquare weights.
double stress_of_projection(const PointSet& points, const Plane2& plane, WeightKind w);
double stress_of_projection(const GeometricGraph& g, const Plane2& plane, WeightKind w);

}  // namespace rggcross
