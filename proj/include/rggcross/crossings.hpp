#pragma once

#include <cstdint>
#include <vector>

#include "rggcross/geometry.hpp"
#include "rggcross/pointprocess.hpp"
#include "rggcross/predicates.hpp"

namespace rggcross {

struct Segment2 {
  Point2 a;
  Point2 b;
};

/// Straight-line drawing: vertex positions in the plane plus edges.
struct Drawing2 {
  std::vector<Point2> positions;
  std::vector<Edge> edges;
};

/// Number of properly crossing pairs of vertex-disjoint edges.
/// `degenerate` is set when an exact predicate met a touching, collinear or
/// equal-abscissa configuration.
struct CrossingCount {
  std::uint64_t count = 0;
  bool degenerate = false;
};

enum class SegmentContact {
  Disjoint,
  ProperCrossing,  // one common point, interior to both segments
  Touching,        // any other contact: endpoint on segment, collinear overlap
};

/// Exact classification of two closed segments (zero-length segments allowed).
SegmentContact classify_segments(const Segment2& s, const Segment2& t);

/// True iff the segments cross properly. Segments sharing an endpoint never
/// cross. Throws std::invalid_argument for a zero-length segment.
bool segments_cross(const Segment2& s, const Segment2& t);

/// O(m^2) reference count over all pairs of vertex-disjoint edges.
CrossingCount count_crossings_bruteforce(const Drawing2& drawing);

/// Plane sweep over x: segments enter the active set at their left abscissa,
/// leave after their right one, and each entering segment is tested exactly
/// against the active segments whose y-range it meets. Any exact tie (shared
/// abscissa between distinct vertices, zero orientation) sets `degenerate`
/// and the result is recomputed by brute force.
CrossingCount count_crossings_sweep(const Drawing2& drawing);

/// Projects all vertices onto the plane.
Drawing2 project_graph(const GeometricGraph& g, const Plane2& plane);

/// cr(G|_L) via the sweep path; throws on dimension mismatch.
CrossingCount crossing_number_of_projection(const GeometricGraph& g, const Plane2& plane);

/// Crossing-lemma lower bound m^3 / (20 n^2), valid for m >= 7n; 0 otherwise.
double crossing_lemma_floor(std::int64_t n, std::int64_t m);

}  // namespace rggcross
