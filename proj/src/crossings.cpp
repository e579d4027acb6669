#include "rggcross/crossings.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace rggcross {
namespace {

bool in_box(const Segment2& s, const Point2& p) {
  return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) && std::min(s.a.y, s.b.y) <= p.y &&
         p.y <= std::max(s.a.y, s.b.y);
}

// Segment with cached bounding box and vertex ids, oriented left to right.
struct SweepSegment {
  Point2 a;
  Point2 b;
  double ymin;
  double ymax;
  std::uint32_t u;
  std::uint32_t v;
};

std::vector<SweepSegment> make_segments(const Drawing2& drawing) {
  std::vector<SweepSegment> segs;
  segs.reserve(drawing.edges.size());
  const auto n = drawing.positions.size();
  for (const Edge& e : drawing.edges) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    Point2 a = drawing.positions[e.u];
    Point2 b = drawing.positions[e.v];
    if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
    segs.push_back({a, b, std::min(a.y, b.y), std::max(a.y, b.y), e.u, e.v});
  }
  return segs;
}

bool share_vertex(const SweepSegment& s, const SweepSegment& t) {
  return s.u == t.u || s.u == t.v || s.v == t.u || s.v == t.v;
}

bool boxes_meet(const SweepSegment& s, const SweepSegment& t) {
  return s.a.x <= t.b.x && t.a.x <= s.b.x && s.ymin <= t.ymax && t.ymin <= s.ymax;
}

}  // namespace

SegmentContact classify_segments(const Segment2& s, const Segment2& t) {
  const int o1 = orient2d(s.a, s.b, t.a);
  const int o2 = orient2d(s.a, s.b, t.b);
  const int o3 = orient2d(t.a, t.b, s.a);
  const int o4 = orient2d(t.a, t.b, s.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return SegmentContact::ProperCrossing;
  if ((o1 == 0 && in_box(s, t.a)) || (o2 == 0 && in_box(s, t.b)) || (o3 == 0 && in_box(t, s.a)) ||
      (o4 == 0 && in_box(t, s.b))) {
    return SegmentContact::Touching;
  }
  return SegmentContact::Disjoint;
}

bool segments_cross(const Segment2& s, const Segment2& t) {
  if (s.a == s.b || t.a == t.b) throw std::invalid_argument("segments_cross: zero-length segment");
  if (s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b) return false;
  return classify_segments(s, t) == SegmentContact::ProperCrossing;
}

CrossingCount count_crossings_bruteforce(const Drawing2& drawing) {
  const auto segs = make_segments(drawing);
  CrossingCount result;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const auto& s = segs[i];
      const auto& t = segs[j];
      if (share_vertex(s, t) || !boxes_meet(s, t)) continue;
      switch (classify_segments({s.a, s.b}, {t.a, t.b})) {
        case SegmentContact::ProperCrossing:
          ++result.count;
          break;
        case SegmentContact::Touching:
          result.degenerate = true;
          break;
        case SegmentContact::Disjoint:
          break;
      }
    }
  }
  return result;
}

CrossingCount count_crossings_sweep(const Drawing2& drawing) {
  const auto segs = make_segments(drawing);
  CrossingCount result;
  if (segs.size() < 2) return result;

  // Equal abscissae between distinct edge-incident vertices cannot be ordered
  // by the sweep without a tie-break, so they count as degenerate.
  {
    std::vector<std::uint32_t> verts;
    verts.reserve(2 * segs.size());
    for (const auto& s : segs) {
      verts.push_back(s.u);
      verts.push_back(s.v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    std::vector<double> xs(verts.size());
    std::transform(verts.begin(), verts.end(), xs.begin(), [&](std::uint32_t v) { return drawing.positions[v].x; });
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) result.degenerate = true;
  }

  if (!result.degenerate) {
    // Event order: left abscissa, then y, then input order. A segment whose
    // right end equals an entering left end is still active (left < right).
    std::vector<std::uint32_t> order(segs.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
      const auto& s = segs[i];
      const auto& t = segs[j];
      if (s.a.x != t.a.x) return s.a.x < t.a.x;
      if (s.a.y != t.a.y) return s.a.y < t.a.y;
      return i < j;
    });

    std::vector<std::uint32_t> active;
    for (std::uint32_t idx : order) {
      const auto& s = segs[idx];
      std::size_t k = 0;
      while (k < active.size()) {
        const auto& t = segs[active[k]];
        if (t.b.x < s.a.x) {
          active[k] = active.back();
          active.pop_back();
          continue;
        }
        ++k;
        if (t.ymax < s.ymin || s.ymax < t.ymin || share_vertex(s, t)) continue;
        const int o1 = orient2d(s.a, s.b, t.a);
        const int o2 = orient2d(s.a, s.b, t.b);
        if (o1 == 0 || o2 == 0) {
          result.degenerate = true;
          continue;
        }
        if (o1 == o2) continue;
        const int o3 = orient2d(t.a, t.b, s.a);
        const int o4 = orient2d(t.a, t.b, s.b);
        if (o3 == 0 || o4 == 0) {
          result.degenerate = true;
          continue;
        }
        if (o3 != o4) ++result.count;
      }
      active.push_back(idx);
    }
  }

  if (result.degenerate) return {count_crossings_bruteforce(drawing).count, true};
  return result;
}

Drawing2 project_graph(const GeometricGraph& g, const Plane2& plane) {
  if (g.dim() != plane.dim()) {
    throw std::invalid_argument(fmt::format("graph in R^{} cannot be projected onto a plane of R^{}", g.dim(), plane.dim()));
  }
  Drawing2 drawing;
  drawing.positions.reserve(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) drawing.positions.push_back(plane.project(g.points[i]));
  drawing.edges = g.edges;
  return drawing;
}

CrossingCount crossing_number_of_projection(const GeometricGraph& g, const Plane2& plane) {
  const Drawing2 drawing = project_graph(g, plane);
  if (drawing.edges.size() < 2) return {};
  return count_crossings_sweep(drawing);
}

double crossing_lemma_floor(std::int64_t n, std::int64_t m) {
  if (n < 1) throw std::invalid_argument("crossing_lemma_floor: need n >= 1");
  if (m < 7 * n) return 0.0;
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return md * md * md / (20.0 * nd * nd);
}

}  // namespace rggcross
