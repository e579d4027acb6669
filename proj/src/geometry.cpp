#include "rggcross/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace rggcross {
namespace {

constexpr double kFrameTolerance = 1e-12;
constexpr double kMinResidual = 1e-9;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dim(int dim) {
  if (dim < 2) throw std::invalid_argument(fmt::format("dimension must be >= 2, got {}", dim));
}

}  // namespace

double kappa(int d) {
  if (d < 0) throw std::invalid_argument("kappa: negative dimension");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

// ---------------------------------------------------------------------------
// ConvexBody

ConvexBody::ConvexBody(BodyKind kind, int dim) : kind_(kind), dim_(dim) {
  check_dim(dim);
  circumradius_ = kind == BodyKind::UnitVolumeBall ? std::pow(kappa(dim), -1.0 / dim)
                                                   : 0.5 * std::sqrt(static_cast<double>(dim));
}

ConvexBody ConvexBody::ball(int dim) { return ConvexBody(BodyKind::UnitVolumeBall, dim); }
ConvexBody ConvexBody::cube(int dim) { return ConvexBody(BodyKind::UnitCube, dim); }

ConvexBody ConvexBody::from_name(const std::string& name, int dim) {
  if (name == "ball") return ball(dim);
  if (name == "cube") return cube(dim);
  throw std::invalid_argument(fmt::format("unknown body kind '{}' (expected ball or cube)", name));
}

std::string ConvexBody::name() const { return kind_ == BodyKind::UnitVolumeBall ? "ball" : "cube"; }

bool ConvexBody::contains(std::span<const double> p) const {
  if (kind_ == BodyKind::UnitVolumeBall) return dot(p, p) <= circumradius_ * circumradius_;
  return std::all_of(p.begin(), p.end(), [](double x) { return std::abs(x) <= 0.5; });
}

void sample_uniform_ball(int dim, double radius, RandomStream& rng, std::span<double> out) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      out[i] = rng.normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / dim) / std::sqrt(norm2);
  for (int i = 0; i < dim; ++i) out[i] *= r;
}

void sample_uniform_body(const ConvexBody& body, RandomStream& rng, std::span<double> out) {
  if (body.kind() == BodyKind::UnitVolumeBall) {
    sample_uniform_ball(body.dim(), body.ball_radius(), rng, out);
    return;
  }
  for (int i = 0; i < body.dim(); ++i) out[i] = rng.uniform() - 0.5;
}

Vector sample_uniform_body(const ConvexBody& body, RandomStream& rng) {
  Vector p(body.dim());
  sample_uniform_body(body, rng, p);
  return p;
}

// ---------------------------------------------------------------------------
// Plane2

Plane2 Plane2::coordinate(int dim) {
  check_dim(dim);
  Vector u1(dim, 0.0);
  Vector u2(dim, 0.0);
  u1[0] = 1.0;
  u2[1] = 1.0;
  return Plane2(std::move(u1), std::move(u2));
}

Plane2 Plane2::from_frame(Vector u1, Vector u2) {
  if (u1.size() != u2.size()) throw std::invalid_argument("plane frame vectors differ in dimension");
  check_dim(static_cast<int>(u1.size()));
  if (std::abs(dot(u1, u1) - 1.0) > kFrameTolerance || std::abs(dot(u2, u2) - 1.0) > kFrameTolerance ||
      std::abs(dot(u1, u2)) > kFrameTolerance) {
    throw std::invalid_argument("plane frame is not orthonormal");
  }
  return Plane2(std::move(u1), std::move(u2));
}

Point2 Plane2::project(std::span<const double> p) const { return {dot(p, u1_), dot(p, u2_)}; }

std::vector<Vector> Plane2::complement_basis() const {
  const int d = dim();
  std::vector<Vector> basis{u1_, u2_};
  std::vector<bool> used(d, false);
  for (int step = 0; step < d - 2; ++step) {
    Vector best;
    double best_norm = -1.0;
    int best_k = -1;
    for (int k = 0; k < d; ++k) {
      if (used[k]) continue;
      Vector v(d, 0.0);
      v[k] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          const double c = dot(v, b);
          for (int i = 0; i < d; ++i) v[i] -= c * b[i];
        }
      }
      const double n = std::sqrt(dot(v, v));
      if (n > best_norm) {
        best_norm = n;
        best = std::move(v);
        best_k = k;
      }
    }
    used[best_k] = true;
    for (double& x : best) x /= best_norm;
    basis.push_back(std::move(best));
  }
  return {basis.begin() + 2, basis.end()};
}

bool Plane2::is_coordinate_plane() const {
  int support = 0;
  for (int k = 0; k < dim(); ++k) {
    if (std::abs(u1_[k]) > kFrameTolerance || std::abs(u2_[k]) > kFrameTolerance) ++support;
  }
  return support == 2;
}

Plane2 sample_plane_haar(int dim, RandomStream& rng) {
  check_dim(dim);
  if (dim == 2) return Plane2::coordinate(2);
  Vector u1(dim);
  Vector u2(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) u1[i] = rng.normal();
    for (int i = 0; i < dim; ++i) u2[i] = rng.normal();
    const double n1 = std::sqrt(dot(u1, u1));
    if (n1 < kMinResidual) continue;
    for (double& x : u1) x /= n1;
    // Modified Gram-Schmidt; the second sweep restores full working precision.
    double n2 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const double c = dot(u2, u1);
      for (int i = 0; i < dim; ++i) u2[i] -= c * u1[i];
      n2 = std::sqrt(dot(u2, u2));
      if (n2 < kMinResidual) break;
      for (double& x : u2) x /= n2;
    }
    if (n2 < kMinResidual) continue;
    return Plane2::from_frame(std::move(u1), std::move(u2));
  }
}

Point2 project(std::span<const double> p, const Plane2& plane) {
  if (static_cast<int>(p.size()) != plane.dim()) {
    throw std::invalid_argument(
        fmt::format("cannot project a {}-vector onto a plane of R^{}", p.size(), plane.dim()));
  }
  return plane.project(p);
}

// ---------------------------------------------------------------------------
// Section volumes

namespace {

Vector lift(const Plane2& plane, Point2 q) {
  Vector v(plane.dim());
  for (int i = 0; i < plane.dim(); ++i) v[i] = q.x * plane.u1()[i] + q.y * plane.u2()[i];
  return v;
}

McEstimate fiber_mc(const ConvexBody& body, const Plane2& plane, const std::vector<Vector>& complement,
                    Point2 q, std::size_t n_samples, RandomStream& rng) {
  const int d = body.dim();
  const auto n = static_cast<std::int64_t>(n_samples);
  const Vector base = lift(plane, q);
  if (d == 2) return {body.contains(base) ? 1.0 : 0.0, 0.0, n};

  const double rho2 = body.circumradius() * body.circumradius() - (q.x * q.x + q.y * q.y);
  if (rho2 <= 0.0) return {0.0, 0.0, n};
  const double rho = std::sqrt(rho2);
  const double box = std::pow(2.0 * rho, d - 2);

  MeanAccumulator acc;
  Vector v(d);
  for (std::size_t s = 0; s < n_samples; ++s) {
    v = base;
    for (const auto& e : complement) {
      const double c = rng.uniform(-rho, rho);
      for (int i = 0; i < d; ++i) v[i] += c * e[i];
    }
    acc.add(body.contains(v) ? 1.0 : 0.0);
  }
  return acc.estimate(box);
}

}  // namespace

std::optional<double> section_volume_exact(const ConvexBody& body, const Plane2& plane, Point2 q) {
  if (body.dim() != plane.dim()) throw std::invalid_argument("body and plane dimensions differ");
  const int d = body.dim();
  if (d == 2) return body.contains(lift(plane, q)) ? 1.0 : 0.0;
  if (body.kind() == BodyKind::UnitVolumeBall) {
    const double r = body.ball_radius();
    const double h2 = r * r - (q.x * q.x + q.y * q.y);
    if (h2 < 0.0) return 0.0;
    return kappa(d - 2) * std::pow(h2, 0.5 * (d - 2));
  }
  if (plane.is_coordinate_plane()) return body.contains(lift(plane, q)) ? 1.0 : 0.0;
  return std::nullopt;
}

McEstimate section_volume_mc(const ConvexBody& body, const Plane2& plane, Point2 q,
                             std::size_t n_samples, RandomStream& rng) {
  if (n_samples == 0) throw std::invalid_argument("section_volume_mc: need at least one sample");
  if (body.dim() != plane.dim()) throw std::invalid_argument("body and plane dimensions differ");
  return fiber_mc(body, plane, plane.complement_basis(), q, n_samples, rng);
}

double section_volume(const ConvexBody& body, const Plane2& plane, Point2 q, RandomStream& rng,
                      std::size_t fiber_samples) {
  if (auto exact = section_volume_exact(body, plane, q)) return *exact;
  return section_volume_mc(body, plane, q, fiber_samples, rng).value;
}

SectionVolume::SectionVolume(const ConvexBody& body, const Plane2& plane, std::size_t fiber_samples)
    : body_(body), plane_(plane), fiber_samples_(fiber_samples) {
  if (body.dim() != plane.dim()) throw std::invalid_argument("body and plane dimensions differ");
  if (fiber_samples == 0) throw std::invalid_argument("fiber sample count must be positive");
  exact_ = body.dim() == 2 || body.kind() == BodyKind::UnitVolumeBall || plane.is_coordinate_plane();
  if (!exact_) complement_ = plane.complement_basis();
}

double SectionVolume::operator()(Point2 q, RandomStream& rng) const {
  if (exact_) return *section_volume_exact(body_, plane_, q);
  return fiber_mc(body_, plane_, complement_, q, fiber_samples_, rng).value;
}

McEstimate SectionVolume::estimate(Point2 q, std::size_t n_samples, RandomStream& rng) const {
  if (exact_) return {*section_volume_exact(body_, plane_, q), 0.0, static_cast<std::int64_t>(n_samples)};
  return fiber_mc(body_, plane_, complement_, q, n_samples, rng);
}

}  // namespace rggcross
