#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rggcross/geometry.hpp"
#include "rggcross/random.hpp"

namespace rggcross {

/// Points of R^d stored contiguously, row i = point i.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<double> operator[](std::size_t i) {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }
  const std::vector<double>& coords() const { return coords_; }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Random geometric graph: points, threshold delta and every pair {i < j}
/// with |p_i - p_j| <= delta, sorted lexicographically.
struct GeometricGraph {
  double delta = 0.0;
  PointSet points;
  std::vector<Edge> edges;

  int dim() const { return points.dim(); }
  std::size_t n() const { return points.size(); }
  std::size_t m() const { return edges.size(); }
};

enum class RegimeKind { Thermodynamic, Dense, Fixed };

/// Map from intensity t to the connection radius delta_t.
///   Thermodynamic(c):  t delta^d = c
///   Dense(c, beta):    t delta^d = c t^(1 - beta)
///   Fixed(delta)
struct RegimeSchedule {
  RegimeKind kind = RegimeKind::Thermodynamic;
  double c = 1.0;
  double beta = 0.5;
  double delta = 0.1;

  static RegimeSchedule thermodynamic(double c);
  static RegimeSchedule dense(double c, double beta);
  static RegimeSchedule fixed(double delta);

  double delta_at(double t, int dim) const;
  std::string name() const;
};

/// Poisson process of intensity t on W: n ~ Poisson(t) uniform points.
PointSet sample_poisson(const ConvexBody& body, double t, RandomStream& rng);
/// Exactly n uniform points on W.
PointSet sample_binomial(const ConvexBody& body, std::size_t n, RandomStream& rng);

/// Exact delta-neighbour graph via a uniform cell grid of side delta.
GeometricGraph build_rgg(PointSet points, double delta);

/// Leading term (kappa_d / 2) t^2 delta^d of the expected edge count.
double expected_edges(const ConvexBody& body, double t, double delta);

/// Text dump: `d n delta`, n coordinate lines, `m`, m lines `i j`.
void write_graph(std::ostream& os, const GeometricGraph& g);
/// Parses the dump format; throws GraphParseError carrying a line number.
GeometricGraph read_graph(std::istream& is);

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rggcross
