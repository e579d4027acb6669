#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rggcross/estimate.hpp"
#include "rggcross/geometry.hpp"
#include "rggcross/random.hpp"
#include "rggcross/stress.hpp"

namespace rggcross::theory {

using rggcross::kappa;

/// Samples per independent substream block. The block layout depends only on
/// (seed, N), never on the worker count.
inline constexpr std::int64_t kBlockSize = 1 << 16;

/// Fiber samples per outer sample when a section volume has no closed form.
inline constexpr std::size_t kDefaultFiberSamples = 64;

// ---------------------------------------------------------------------------
// Crossing constants. The plane defaults to the first two coordinate axes;
// the defining integrals are rotation invariant, so any plane gives the same
// constant.

/// c_d = vol(B_d x 2B_2 x B_d) * P([0, x|_L] meets y + [0, z|_L]),
/// x, z uniform in B_d and y uniform in the disc of radius 2 in L.
/// Touching counts as meeting.
McEstimate estimate_c_d(int d, std::int64_t n_samples, RandomStream& rng, int workers = 1);
McEstimate estimate_c_d(const Plane2& plane, std::int64_t n_samples, RandomStream& rng, int workers = 1);

/// Fraction of c_d samples whose mirrored offset -y also meets [0, x|_L];
/// zero up to touching configurations.
McEstimate c_d_mirror_overlap(int d, std::int64_t n_samples, RandomStream& rng, int workers = 1);

/// c'_d = vol(B_d x (2B_2)^2 x B_d^2) * P(both segments y_i + [0, z_i|_L] meet [0, x|_L]).
McEstimate estimate_c_prime_d(int d, std::int64_t n_samples, RandomStream& rng, int workers = 1);
McEstimate estimate_c_prime_d(const Plane2& plane, std::int64_t n_samples, RandomStream& rng,
                              int workers = 1);

// ---------------------------------------------------------------------------
// Section-volume integrals over a unit-volume body (plain means over uniform
// points of W).

/// I2(W, L) = integral over W|_L of sec^2 = E_v sec(v|_L).
McEstimate I2(const ConvexBody& body, const Plane2& plane, std::int64_t n_samples, RandomStream& rng,
              int workers = 1, std::size_t fiber_samples = kDefaultFiberSamples);
/// I3(W, L) = integral over W|_L of sec^3 = E_v sec(v|_L)^2.
McEstimate I3(const ConvexBody& body, const Plane2& plane, std::int64_t n_samples, RandomStream& rng,
              int workers = 1, std::size_t fiber_samples = kDefaultFiberSamples);

/// Closed radial integrals for the unit-volume ball.
double I2_ball(int d);
double I3_ball(int d);

// ---------------------------------------------------------------------------
// Stress integrals; g(v, v1) = w(v, v1) (d_0 - d_L)^2.

/// S1 = E g(v1, v2).
McEstimate S1(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n_samples,
              RandomStream& rng, int workers = 1);
/// S2 = E g(v, v1) g(v, v2).
McEstimate S2(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n_samples,
              RandomStream& rng, int workers = 1);
/// E sec(v|_L) g(v, v1): the double integral in the covariance lower bound.
McEstimate section_stress(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n_samples,
                          RandomStream& rng, int workers = 1,
                          std::size_t fiber_samples = kDefaultFiberSamples);

// ---------------------------------------------------------------------------

/// Finite-delta crossing integral through a fixed vertex v:
/// I_W(v) = vol(delta B_d)^2 * E[1(v+x in W) 1(y+z in W) 1([v, v+x]|_L meets [y, y+z]|_L)],
/// x, z uniform in delta B_d, y uniform in W (sampled only where the
/// indicator can fire).
McEstimate IW(std::span<const double> v, const ConvexBody& body, const Plane2& plane, double delta,
              std::int64_t n_samples, RandomStream& rng, int workers = 1);

/// (t^5 / 16) c_d delta^(2d+2) E[sec(v|_L) g(v, v1)], the limit form of the
/// covariance lower bound. The first overload estimates c_d with the same N.
McEstimate cov_lower_bound(const ConvexBody& body, const Plane2& plane, WeightKind w, double t, double delta,
                           std::int64_t n_samples, RandomStream& rng, int workers = 1);
McEstimate cov_lower_bound(const ConvexBody& body, const Plane2& plane, WeightKind w, double t, double delta,
                           const McEstimate& c_d, std::int64_t n_samples, RandomStream& rng, int workers = 1);

/// Spread of I2(W, L) over Haar-random planes: sample variance of the
/// per-plane estimates minus the mean squared Monte Carlo error.
struct PlaneDispersion {
  std::vector<McEstimate> per_plane;
  double mean = 0.0;
  double second_moment = 0.0;
  double raw_variance = 0.0;
  double noise = 0.0;
  double bracket = 0.0;
};
PlaneDispersion i2_plane_dispersion(const ConvexBody& body, int n_planes, std::int64_t n_samples,
                                    RandomStream& rng, int workers = 1);

// ---------------------------------------------------------------------------

/// Every constant the moment formulas consume.
struct Constants {
  int d = 0;
  std::string body;
  std::string plane;
  std::string weight;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  McEstimate c_d;
  McEstimate c_prime_d;
  McEstimate I2;
  McEstimate I3;
  McEstimate S1;
  McEstimate S2;
  McEstimate section_stress;
};

/// Runs every estimator, each on its own substream of `seed`.
Constants compute_constants(const ConvexBody& body, const Plane2& plane, const std::string& plane_label,
                            WeightKind w, std::int64_t n_samples, std::uint64_t seed, int workers = 1);

/// Leading-order moment predictions at (t, delta).
struct MomentPredictions {
  double t = 0.0;
  double delta = 0.0;
  double e_cr = 0.0;
  std::optional<double> var_cr_lb;  // unavailable for d < 3
  std::optional<double> var_cr_ub;
  double e_stress = 0.0;
  double var_stress = 0.0;
  double cov_lb = 0.0;
  std::optional<double> corr_lb;
  double e_m = 0.0;
};

MomentPredictions predict_moments(const ConvexBody& body, double t, double delta, const Constants& k);

/// Error terms dropped by predict_moments, for output metadata.
std::vector<std::string> prediction_notes();

}  // namespace rggcross::theory
