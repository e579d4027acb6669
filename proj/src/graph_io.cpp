#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rggcross/pointprocess.hpp"

namespace rggcross {

GraphParseError::GraphParseError(int line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

void write_graph(std::ostream& os, const GeometricGraph& g) {
  os << fmt::format("{} {} {:.17g}\n", g.dim(), g.n(), g.delta);
  for (std::size_t i = 0; i < g.n(); ++i) {
    const auto p = g.points[i];
    for (int k = 0; k < g.dim(); ++k) os << (k == 0 ? "" : " ") << fmt::format("{:.17g}", p[k]);
    os << '\n';
  }
  os << g.m() << '\n';
  for (const Edge& e : g.edges) os << e.u << ' ' << e.v << '\n';
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-blank line as a string stream; throws at end of input.
  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw GraphParseError(line_no_ + 1, fmt::format("unexpected end of input, expected {}", expecting));
  }

  int line() const { return line_no_; }

 private:
  std::istream& is_;
  int line_no_ = 0;
};

void expect_end(std::istringstream& ss, int line) {
  std::string rest;
  if (ss >> rest) throw GraphParseError(line, fmt::format("unexpected trailing token '{}'", rest));
}

}  // namespace

GeometricGraph read_graph(std::istream& is) {
  LineReader reader(is);

  auto header = reader.next("header `d n delta`");
  long long d = 0;
  long long n = 0;
  double delta = 0.0;
  if (!(header >> d >> n >> delta)) throw GraphParseError(reader.line(), "malformed header, expected `d n delta`");
  expect_end(header, reader.line());
  if (d < 2) throw GraphParseError(reader.line(), fmt::format("dimension must be >= 2, got {}", d));
  if (n < 0) throw GraphParseError(reader.line(), "negative vertex count");
  if (!(delta > 0.0)) throw GraphParseError(reader.line(), "delta must be positive");

  GeometricGraph g;
  g.delta = delta;
  g.points = PointSet(static_cast<int>(d));
  g.points.reserve(static_cast<std::size_t>(n));
  Vector p(static_cast<std::size_t>(d));
  for (long long i = 0; i < n; ++i) {
    auto row = reader.next("a coordinate line");
    for (auto& x : p) {
      if (!(row >> x)) throw GraphParseError(reader.line(), fmt::format("expected {} coordinates", d));
    }
    expect_end(row, reader.line());
    g.points.push_back(p);
  }

  auto count = reader.next("edge count `m`");
  long long m = 0;
  if (!(count >> m) || m < 0) throw GraphParseError(reader.line(), "malformed edge count");
  expect_end(count, reader.line());
  g.edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    auto row = reader.next("an edge line `i j`");
    long long i = 0;
    long long j = 0;
    if (!(row >> i >> j)) throw GraphParseError(reader.line(), "malformed edge, expected `i j`");
    expect_end(row, reader.line());
    if (i < 0 || j < 0 || i >= n || j >= n) throw GraphParseError(reader.line(), "edge endpoint out of range");
    if (i == j) throw GraphParseError(reader.line(), "self-loop");
    if (i > j) std::swap(i, j);
    g.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) {
    throw GraphParseError(reader.line(), "duplicate edge");
  }
  return g;
}

}  // namespace rggcross
