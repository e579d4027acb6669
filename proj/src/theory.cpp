#include "rggcross/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rggcross/crossings.hpp"
#include "rggcross/parallel.hpp"
#include "rggcross/pointprocess.hpp"

namespace rggcross::theory {
namespace {

constexpr double kPi = std::numbers::pi;

// Substream tags for compute_constants.
enum ConstantTag : std::uint64_t { kTagCd = 1, kTagCprime, kTagI2, kTagI3, kTagS1, kTagS2, kTagSecStress };

void require_samples(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("Monte Carlo estimators need N >= 1");
}

// Mean of sample(rng) over n draws, cut into fixed blocks with their own
// substreams and merged in block order.
template <class Sample>
McEstimate block_estimate(std::int64_t n, RandomStream& rng, int workers, double scale, Sample sample) {
  require_samples(n);
  const std::uint64_t base = rng.bits();
  const std::size_t blocks = static_cast<std::size_t>((n + kBlockSize - 1) / kBlockSize);
  std::vector<MeanAccumulator> acc(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    RandomStream s = RandomStream::derive(base, {stream_tag::kBlock, b});
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlockSize;
    const std::int64_t count = std::min(kBlockSize, n - begin);
    for (std::int64_t i = 0; i < count; ++i) acc[b].add(sample(s));
  });
  MeanAccumulator total;
  for (const auto& a : acc) total.merge(a);
  return total.estimate(scale);
}

Point2 random_ball_projection(const Plane2& plane, double radius, RandomStream& rng, std::vector<double>& buf) {
  sample_uniform_ball(plane.dim(), radius, rng, buf);
  return plane.project(buf);
}

Point2 random_disc(double radius, RandomStream& rng) {
  double p[2];
  sample_uniform_ball(2, radius, rng, p);
  return {p[0], p[1]};
}

bool meets(const Segment2& s, const Segment2& t) { return classify_segments(s, t) != SegmentContact::Disjoint; }

Segment2 offset_segment(Point2 y, Point2 z) { return {y, {y.x + z.x, y.y + z.y}}; }

void require_match(const ConvexBody& body, const Plane2& plane) {
  if (body.dim() != plane.dim()) throw std::invalid_argument("body and plane dimensions differ");
}

}  // namespace

McEstimate estimate_c_d(const Plane2& plane, std::int64_t n, RandomStream& rng, int workers) {
  const int d = plane.dim();
  const double scale = kappa(d) * 4.0 * kPi * kappa(d);
  return block_estimate(n, rng, workers, scale, [&plane](RandomStream& s) {
    thread_local std::vector<double> buf;
    buf.resize(plane.dim());
    const Point2 x = random_ball_projection(plane, 1.0, s, buf);
    const Point2 y = random_disc(2.0, s);
    const Point2 z = random_ball_projection(plane, 1.0, s, buf);
    return meets({{0.0, 0.0}, x}, offset_segment(y, z)) ? 1.0 : 0.0;
  });
}

McEstimate estimate_c_d(int d, std::int64_t n, RandomStream& rng, int workers) {
  return estimate_c_d(Plane2::coordinate(d), n, rng, workers);
}

McEstimate c_d_mirror_overlap(int d, std::int64_t n, RandomStream& rng, int workers) {
  const Plane2 plane = Plane2::coordinate(d);
  return block_estimate(n, rng, workers, 1.0, [&plane](RandomStream& s) {
    thread_local std::vector<double> buf;
    buf.resize(plane.dim());
    const Point2 x = random_ball_projection(plane, 1.0, s, buf);
    const Point2 y = random_disc(2.0, s);
    const Point2 z = random_ball_projection(plane, 1.0, s, buf);
    const Segment2 base{{0.0, 0.0}, x};
    return meets(base, offset_segment(y, z)) && meets(base, offset_segment({-y.x, -y.y}, z)) ? 1.0 : 0.0;
  });
}

McEstimate estimate_c_prime_d(const Plane2& plane, std::int64_t n, RandomStream& rng, int workers) {
  const int d = plane.dim();
  const double scale = kappa(d) * (4.0 * kPi) * (4.0 * kPi) * kappa(d) * kappa(d);
  return block_estimate(n, rng, workers, scale, [&plane](RandomStream& s) {
    thread_local std::vector<double> buf;
    buf.resize(plane.dim());
    const Point2 x = random_ball_projection(plane, 1.0, s, buf);
    const Point2 y1 = random_disc(2.0, s);
    const Point2 y2 = random_disc(2.0, s);
    const Point2 z1 = random_ball_projection(plane, 1.0, s, buf);
    const Point2 z2 = random_ball_projection(plane, 1.0, s, buf);
    const Segment2 base{{0.0, 0.0}, x};
    return meets(base, offset_segment(y1, z1)) && meets(base, offset_segment(y2, z2)) ? 1.0 : 0.0;
  });
}

McEstimate estimate_c_prime_d(int d, std::int64_t n, RandomStream& rng, int workers) {
  return estimate_c_prime_d(Plane2::coordinate(d), n, rng, workers);
}

namespace {

McEstimate section_power(const ConvexBody& body, const Plane2& plane, int power, std::int64_t n, RandomStream& rng,
                         int workers, std::size_t fiber_samples) {
  require_match(body, plane);
  const SectionVolume sec(body, plane, fiber_samples);
  return block_estimate(n, rng, workers, 1.0, [&](RandomStream& s) {
    thread_local std::vector<double> v;
    v.resize(body.dim());
    sample_uniform_body(body, s, v);
    const Point2 q = plane.project(v);
    const double a = sec(q, s);
    if (power == 1) return a;
    // Two independent fiber estimates keep the square unbiased.
    return sec.exact() ? a * a : a * sec(q, s);
  });
}

}  // namespace

McEstimate I2(const ConvexBody& body, const Plane2& plane, std::int64_t n, RandomStream& rng, int workers,
              std::size_t fiber_samples) {
  return section_power(body, plane, 1, n, rng, workers, fiber_samples);
}

McEstimate I3(const ConvexBody& body, const Plane2& plane, std::int64_t n, RandomStream& rng, int workers,
              std::size_t fiber_samples) {
  return section_power(body, plane, 2, n, rng, workers, fiber_samples);
}

double I2_ball(int d) {
  if (d < 2) throw std::invalid_argument("I2_ball: d >= 2");
  const double r = ConvexBody::ball(d).ball_radius();
  const double k = kappa(d - 2);
  return kPi * k * k * std::pow(r, 2.0 * (d - 1)) / (d - 1);
}

double I3_ball(int d) {
  if (d < 2) throw std::invalid_argument("I3_ball: d >= 2");
  const double r = ConvexBody::ball(d).ball_radius();
  const double k = kappa(d - 2);
  return 2.0 * kPi * k * k * k * std::pow(r, 3.0 * d - 4.0) / (3.0 * d - 4.0);
}

McEstimate S1(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n, RandomStream& rng,
              int workers) {
  require_match(body, plane);
  return block_estimate(n, rng, workers, 1.0, [&](RandomStream& s) {
    thread_local std::vector<double> a, b;
    a.resize(body.dim());
    b.resize(body.dim());
    sample_uniform_body(body, s, a);
    sample_uniform_body(body, s, b);
    return stress_term(a, b, plane, w);
  });
}

McEstimate S2(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n, RandomStream& rng,
              int workers) {
  require_match(body, plane);
  return block_estimate(n, rng, workers, 1.0, [&](RandomStream& s) {
    thread_local std::vector<double> v, a, b;
    v.resize(body.dim());
    a.resize(body.dim());
    b.resize(body.dim());
    sample_uniform_body(body, s, v);
    sample_uniform_body(body, s, a);
    sample_uniform_body(body, s, b);
    return stress_term(v, a, plane, w) * stress_term(v, b, plane, w);
  });
}

McEstimate section_stress(const ConvexBody& body, const Plane2& plane, WeightKind w, std::int64_t n,
                          RandomStream& rng, int workers, std::size_t fiber_samples) {
  require_match(body, plane);
  const SectionVolume sec(body, plane, fiber_samples);
  return block_estimate(n, rng, workers, 1.0, [&](RandomStream& s) {
    thread_local std::vector<double> v, a;
    v.resize(body.dim());
    a.resize(body.dim());
    sample_uniform_body(body, s, v);
    sample_uniform_body(body, s, a);
    return sec(plane.project(v), s) * stress_term(v, a, plane, w);
  });
}

McEstimate IW(std::span<const double> v, const ConvexBody& body, const Plane2& plane, double delta,
              std::int64_t n, RandomStream& rng, int workers) {
  require_match(body, plane);
  if (static_cast<int>(v.size()) != body.dim()) throw std::invalid_argument("IW: vertex dimension mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("IW: delta must be positive");
  const int d = body.dim();
  // The projected segments can only meet when |y|_L - v|_L| <= 2 delta, so y
  // is drawn from the cylinder over that disc, cut to the circumscribed box
  // in L^perp; the estimand is unchanged.
  const auto comp = plane.complement_basis();
  const double R = body.circumradius();
  const double vol_ball = kappa(d) * std::pow(delta, d);
  const double vol_cyl = kPi * 4.0 * delta * delta * std::pow(2.0 * R, d - 2);
  const Vector v0(v.begin(), v.end());
  const Point2 pv = plane.project(v0);
  return block_estimate(n, rng, workers, vol_ball * vol_ball * vol_cyl, [&](RandomStream& s) {
    thread_local std::vector<double> p, y, q;
    p.resize(d);
    y.resize(d);
    q.resize(d);
    sample_uniform_ball(d, delta, s, p);
    for (int k = 0; k < d; ++k) p[k] += v0[k];
    const Point2 off = random_disc(2.0 * delta, s);
    for (int k = 0; k < d; ++k) y[k] = (pv.x + off.x) * plane.u1()[k] + (pv.y + off.y) * plane.u2()[k];
    for (const auto& e : comp) {
      const double c = s.uniform(-R, R);
      for (int k = 0; k < d; ++k) y[k] += c * e[k];
    }
    sample_uniform_ball(d, delta, s, q);
    for (int k = 0; k < d; ++k) q[k] += y[k];
    if (!body.contains(p) || !body.contains(y) || !body.contains(q)) return 0.0;
    return meets({pv, plane.project(p)}, {plane.project(y), plane.project(q)}) ? 1.0 : 0.0;
  });
}

McEstimate cov_lower_bound(const ConvexBody& body, const Plane2& plane, WeightKind w, double t, double delta,
                           const McEstimate& c_d, std::int64_t n, RandomStream& rng, int workers) {
  const McEstimate j = section_stress(body, plane, w, n, rng, workers);
  const int d = body.dim();
  const double lead = std::pow(t, 5) / 16.0 * std::pow(delta, 2.0 * d + 2.0);
  McEstimate out;
  out.value = lead * c_d.value * j.value;
  // Delta method for a product of independent estimates.
  out.std_error = lead * std::hypot(c_d.value * j.std_error, j.value * c_d.std_error);
  out.n_samples = j.n_samples;
  return out;
}

McEstimate cov_lower_bound(const ConvexBody& body, const Plane2& plane, WeightKind w, double t, double delta,
                           std::int64_t n, RandomStream& rng, int workers) {
  const McEstimate c = estimate_c_d(body.dim(), n, rng, workers);
  return cov_lower_bound(body, plane, w, t, delta, c, n, rng, workers);
}

PlaneDispersion i2_plane_dispersion(const ConvexBody& body, int n_planes, std::int64_t n, RandomStream& rng,
                                    int workers) {
  if (n_planes < 2) throw std::invalid_argument("i2_plane_dispersion: need two or more planes");
  const std::uint64_t base = rng.bits();
  PlaneDispersion out;
  for (int k = 0; k < n_planes; ++k) {
    RandomStream plane_rng = RandomStream::derive(base, {stream_tag::kPlane, static_cast<std::uint64_t>(k)});
    const Plane2 plane = sample_plane_haar(body.dim(), plane_rng);
    out.per_plane.push_back(I2(body, plane, n, plane_rng, workers));
  }
  std::vector<double> values;
  for (const auto& e : out.per_plane) {
    values.push_back(e.value);
    out.noise += e.std_error * e.std_error;
  }
  out.noise /= n_planes;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  out.mean = sum / n_planes;
  out.second_moment = sum_sq / n_planes;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.raw_variance = ss / (n_planes - 1);
  out.bracket = out.raw_variance - out.noise;
  return out;
}

Constants compute_constants(const ConvexBody& body, const Plane2& plane, const std::string& plane_label,
                            WeightKind w, std::int64_t n, std::uint64_t seed, int workers) {
  require_match(body, plane);
  Constants k;
  k.d = body.dim();
  k.body = body.name();
  k.plane = plane_label;
  k.weight = weight_name(w);
  k.n_samples = n;
  k.seed = seed;
  auto stream = [seed](std::uint64_t tag) { return RandomStream::derive(seed, {tag}); };
  {
    auto s = stream(kTagCd);
    k.c_d = estimate_c_d(body.dim(), n, s, workers);
  }
  {
    auto s = stream(kTagCprime);
    k.c_prime_d = estimate_c_prime_d(body.dim(), n, s, workers);
  }
  {
    auto s = stream(kTagI2);
    k.I2 = I2(body, plane, n, s, workers);
  }
  {
    auto s = stream(kTagI3);
    k.I3 = I3(body, plane, n, s, workers);
  }
  {
    auto s = stream(kTagS1);
    k.S1 = S1(body, plane, w, n, s, workers);
  }
  {
    auto s = stream(kTagS2);
    k.S2 = S2(body, plane, w, n, s, workers);
  }
  {
    auto s = stream(kTagSecStress);
    k.section_stress = section_stress(body, plane, w, n, s, workers);
  }
  return k;
}

MomentPredictions predict_moments(const ConvexBody& body, double t, double delta, const Constants& k) {
  if (!(t > 0.0) || !(delta > 0.0)) throw std::invalid_argument("predict_moments: t and delta must be positive");
  const int d = body.dim();
  const double c = k.c_d.value;
  MomentPredictions p;
  p.t = t;
  p.delta = delta;
  p.e_cr = c * std::pow(t, 4) * std::pow(delta, 2.0 * d + 2.0) * k.I2.value / 8.0;
  p.e_stress = 0.5 * t * t * k.S1.value;
  p.var_stress = 0.25 * t * t * t * k.S2.value;
  p.cov_lb = std::pow(t, 5) / 16.0 * c * std::pow(delta, 2.0 * d + 2.0) * k.section_stress.value;
  p.e_m = expected_edges(body, t, delta);
  if (d >= 3) {
    const double lead = std::pow(t, 7) * std::pow(delta, 4.0 * d + 4.0) * k.I3.value / 64.0;
    p.var_cr_lb = c * c * lead;
    p.var_cr_ub = (c * c + 2.0 * kPi * kappa(d) * c / (t * std::pow(delta, d))) * lead;
    const double denom = std::sqrt(*p.var_cr_ub * p.var_stress);
    if (denom > 0.0) p.corr_lb = std::clamp(p.cov_lb / denom, -1.0, 1.0);
  }
  return p;
}

std::vector<std::string> prediction_notes() {
  return {
      "e_cr: leading term, relative error o(1) as t -> inf, delta -> 0",
      "var_cr: leading terms t^7 delta^(4d+4) and t^6 delta^(3d+4); lower-order terms of order t^4 delta^(3d+2) "
      "and below omitted",
      "e_stress: exact for Poisson input",
      "var_stress: leading term, error O(t^2)",
      "cov_lb, corr_lb: limit form with I_W(v) ~ c_d delta^(2d+2) sec(v|_L)",
  };
}

}  // namespace rggcross::theory
