#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rggcross/estimate.hpp"
#include "rggcross/predicates.hpp"
#include "rggcross/random.hpp"

namespace rggcross {

/// A point of R^d.
using Vector = std::vector<double>;

/// Volume of the unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1).
double kappa(int d);

enum class BodyKind { UnitVolumeBall, UnitCube };

/// Unit-volume convex body centred at the origin: either the ball of radius
/// kappa(d)^(-1/d) or the axis-parallel cube [-1/2, 1/2]^d.
class ConvexBody {
 public:
  static ConvexBody ball(int dim);
  static ConvexBody cube(int dim);
  /// Parses "ball" / "cube"; throws std::invalid_argument otherwise.
  static ConvexBody from_name(const std::string& name, int dim);

  BodyKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string name() const;

  /// Radius of the smallest origin-centred ball containing the body.
  double circumradius() const { return circumradius_; }
  /// Ball radius r_d (only meaningful for the ball).
  double ball_radius() const { return circumradius_; }

  bool contains(std::span<const double> p) const;

 private:
  ConvexBody(BodyKind kind, int dim);

  BodyKind kind_;
  int dim_;
  double circumradius_;
};

void sample_uniform_body(const ConvexBody& body, RandomStream& rng, std::span<double> out);
Vector sample_uniform_body(const ConvexBody& body, RandomStream& rng);

/// Uniform point of the centred ball of the given radius in R^d.
void sample_uniform_ball(int dim, double radius, RandomStream& rng, std::span<double> out);

/// Orthonormal 2-frame (u1, u2) spanning a linear plane L of R^d.
class Plane2 {
 public:
  /// Frame of the first two coordinate axes.
  static Plane2 coordinate(int dim);
  /// Validates orthonormality (1e-12) and throws std::invalid_argument otherwise.
  static Plane2 from_frame(Vector u1, Vector u2);

  int dim() const { return static_cast<int>(u1_.size()); }
  const Vector& u1() const { return u1_; }
  const Vector& u2() const { return u2_; }

  Point2 project(std::span<const double> p) const;

  /// Orthonormal basis of L^perp (d - 2 vectors).
  std::vector<Vector> complement_basis() const;

  /// True when L is spanned by two coordinate axes.
  bool is_coordinate_plane() const;

 private:
  Plane2(Vector u1, Vector u2) : u1_(std::move(u1)), u2_(std::move(u2)) {}

  Vector u1_;
  Vector u2_;
};

/// Haar-random plane: orthonormalised d x 2 Gaussian matrix (identity frame for d = 2).
Plane2 sample_plane_haar(int dim, RandomStream& rng);

/// (p.u1, p.u2); throws std::invalid_argument on dimension mismatch.
Point2 project(std::span<const double> p, const Plane2& plane);

/// vol_{d-2}((v + L^perp) cap W) for any v with v|_L = q, when a closed form
/// exists: the ball, the cube over a coordinate plane, and every body for d = 2
/// (a nonempty point fiber has vol_0 = 1).
std::optional<double> section_volume_exact(const ConvexBody& body, const Plane2& plane, Point2 q);

/// Fiber volume by hit-or-miss sampling in the (d-2)-box [-rho, rho]^(d-2)
/// of L^perp coordinates, rho^2 = R^2 - |q|^2 with R the circumradius.
McEstimate section_volume_mc(const ConvexBody& body, const Plane2& plane, Point2 q,
                             std::size_t n_samples, RandomStream& rng);

/// Exact section volume when available, otherwise a Monte Carlo fiber estimate.
double section_volume(const ConvexBody& body, const Plane2& plane, Point2 q,
                      RandomStream& rng, std::size_t fiber_samples = 256);

/// Reusable fiber sampler: caches the complement basis of the plane.
class SectionVolume {
 public:
  SectionVolume(const ConvexBody& body, const Plane2& plane, std::size_t fiber_samples = 256);

  bool exact() const { return exact_; }
  double operator()(Point2 q, RandomStream& rng) const;
  McEstimate estimate(Point2 q, std::size_t n_samples, RandomStream& rng) const;

 private:
  ConvexBody body_;
  Plane2 plane_;
  std::size_t fiber_samples_;
  bool exact_;
  std::vector<Vector> complement_;
};

}  // namespace rggcross
