#include "rggcross/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace rggcross {

void PointSet::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim_) {
    throw std::invalid_argument(fmt::format("point of dimension {} added to a {}-dimensional set", p.size(), dim_));
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
}

RegimeSchedule RegimeSchedule::thermodynamic(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("thermodynamic schedule needs c > 0");
  RegimeSchedule s;
  s.kind = RegimeKind::Thermodynamic;
  s.c = c;
  return s;
}

RegimeSchedule RegimeSchedule::dense(double c, double beta) {
  if (!(c > 0.0)) throw std::invalid_argument("dense schedule needs c > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("dense schedule needs 0 < beta < 1");
  RegimeSchedule s;
  s.kind = RegimeKind::Dense;
  s.c = c;
  s.beta = beta;
  return s;
}

RegimeSchedule RegimeSchedule::fixed(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("fixed schedule needs delta > 0");
  RegimeSchedule s;
  s.kind = RegimeKind::Fixed;
  s.delta = delta;
  return s;
}

double RegimeSchedule::delta_at(double t, int dim) const {
  if (!(t > 0.0)) throw std::invalid_argument("intensity must be positive");
  switch (kind) {
    case RegimeKind::Thermodynamic:
      return std::pow(c / t, 1.0 / dim);
    case RegimeKind::Dense:
      return std::pow(c * std::pow(t, -beta), 1.0 / dim);
    case RegimeKind::Fixed:
      return delta;
  }
  return delta;
}

std::string RegimeSchedule::name() const {
  switch (kind) {
    case RegimeKind::Thermodynamic:
      return "thermodynamic";
    case RegimeKind::Dense:
      return "dense";
    case RegimeKind::Fixed:
      return "fixed";
  }
  return "fixed";
}

PointSet sample_poisson(const ConvexBody& body, double t, RandomStream& rng) {
  if (!(t > 0.0)) throw std::invalid_argument(fmt::format("Poisson intensity must be positive, got {}", t));
  return sample_binomial(body, rng.poisson(t), rng);
}

PointSet sample_binomial(const ConvexBody& body, std::size_t n, RandomStream& rng) {
  PointSet pts(body.dim());
  pts.reserve(n);
  Vector p(body.dim());
  for (std::size_t i = 0; i < n; ++i) {
    sample_uniform_body(body, rng, p);
    pts.push_back(p);
  }
  return pts;
}

GeometricGraph build_rgg(PointSet points, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument(fmt::format("delta must be positive, got {}", delta));
  GeometricGraph g;
  g.delta = delta;
  g.points = std::move(points);
  const std::size_t n = g.points.size();
  const int d = g.points.dim();
  if (n < 2) return g;

  // Cell coordinates floor(x / delta); only occupied cells exist, as runs of
  // the point order sorted by cell.
  std::vector<std::int64_t> cell(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) cell[i * d + k] = static_cast<std::int64_t>(std::floor(g.points[i][k] / delta));
  }
  auto cell_of = [&](std::size_t i) { return std::span<const std::int64_t>(cell.data() + i * d, d); };
  auto cell_less = [](std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ca = cell_of(a);
    const auto cb = cell_of(b);
    if (cell_less(ca, cb)) return true;
    if (cell_less(cb, ca)) return false;
    return a < b;
  });

  // Run starts of each occupied cell within `order`.
  std::vector<std::size_t> run_start;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || cell_less(cell_of(order[r - 1]), cell_of(order[r]))) run_start.push_back(r);
  }
  run_start.push_back(n);
  const std::size_t n_cells = run_start.size() - 1;

  auto find_cell = [&](std::span<const std::int64_t> key) -> std::ptrdiff_t {
    std::size_t lo = 0;
    std::size_t hi = n_cells;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cell_less(cell_of(order[run_start[mid]]), key)) lo = mid + 1;
      else hi = mid;
    }
    if (lo < n_cells && !cell_less(key, cell_of(order[run_start[lo]]))) return static_cast<std::ptrdiff_t>(lo);
    return -1;
  };

  const double delta2 = delta * delta;
  auto within = [&](std::uint32_t a, std::uint32_t b) {
    const auto pa = g.points[a];
    const auto pb = g.points[b];
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double diff = pa[k] - pb[k];
      s += diff * diff;
    }
    return s <= delta2;
  };

  std::vector<std::int64_t> key(d);
  std::vector<int> offset(d, -1);
  for (std::size_t c = 0; c < n_cells; ++c) {
    const auto home = cell_of(order[run_start[c]]);
    std::fill(offset.begin(), offset.end(), -1);
    for (;;) {
      for (int k = 0; k < d; ++k) key[k] = home[k] + offset[k];
      const std::ptrdiff_t other = find_cell(key);
      if (other >= 0) {
        for (std::size_t a = run_start[c]; a < run_start[c + 1]; ++a) {
          for (std::size_t b = run_start[other]; b < run_start[other + 1]; ++b) {
            const std::uint32_t i = order[a];
            const std::uint32_t j = order[b];
            if (i < j && within(i, j)) g.edges.push_back({i, j});
          }
        }
      }
      int k = 0;
      while (k < d && offset[k] == 1) offset[k++] = -1;
      if (k == d) break;
      ++offset[k];
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

double expected_edges(const ConvexBody& body, double t, double delta) {
  if (!(t > 0.0) || !(delta > 0.0)) throw std::invalid_argument("expected_edges needs t > 0 and delta > 0");
  return 0.5 * kappa(body.dim()) * t * t * std::pow(delta, body.dim());
}

}  // namespace rggcross
