#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "rggcross/crossings.hpp"
#include "rggcross/experiments.hpp"
#include "rggcross/parallel.hpp"

namespace rggcross {

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Warn: return "WARN";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
    case CheckStatus::Refused: return "REFUSED";
  }
  return "?";
}

std::optional<double> CheckReport::get(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  return std::nullopt;
}

CheckReport lln_check(const ExperimentResult& r, const theory::Constants& k, double tolerance) {
  CheckReport rep;
  rep.name = "lln";
  const auto& cfg = r.config;
  if (r.summary.size() < 3) {
    rep.status = CheckStatus::Refused;
    rep.message = "needs three or more grid points";
    return rep;
  }
  const double target = k.c_d.value * k.I2.value / 8.0;
  rep.set("target", target);
  std::vector<double> dev, hw;
  bool positive = true;
  for (std::size_t i = 0; i < r.summary.size(); ++i) {
    const auto& s = r.summary[i];
    const double scale = std::pow(s.t, 4) * std::pow(s.delta, 2.0 * cfg.d + 2.0);
    const double ratio = s.cr.mean / scale;
    positive = positive && ratio > 0.0;
    dev.push_back(ratio / target - 1.0);
    hw.push_back(s.cr.mean_ci.half_width() / scale / target);
    rep.set(fmt::format("t[{}]", i), s.t);
    rep.set(fmt::format("ratio[{}]", i), ratio);
    rep.set(fmt::format("ratio_lo[{}]", i), s.cr.mean_ci.lo / scale);
    rep.set(fmt::format("ratio_hi[{}]", i), s.cr.mean_ci.hi / scale);
    rep.set(fmt::format("deviation[{}]", i), dev.back());
  }
  int inversions = 0;
  int wide_inversions = 0;
  for (std::size_t i = 1; i < dev.size(); ++i) {
    const double rise = std::abs(dev[i]) - std::abs(dev[i - 1]);
    if (rise > 0.0) {
      ++inversions;
      if (rise > std::hypot(hw[i], hw[i - 1])) ++wide_inversions;
    }
  }
  rep.set("inversions", inversions);
  const double last = std::abs(dev.back());
  const bool ok = positive && last <= tolerance && wide_inversions == 0 && inversions <= 1;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  rep.message = fmt::format("deviation at t={:g}: {:+.3f} (tolerance {:g}); {} inversion(s), {} beyond CI",
                            r.summary.back().t, dev.back(), tolerance, inversions, wide_inversions);
  return rep;
}

CheckReport variance_sandwich_check(const ExperimentResult& r, const theory::Constants& k, double tau) {
  CheckReport rep;
  rep.name = "sandwich";
  const auto& cfg = r.config;
  if (cfg.d < 3) {
    rep.status = CheckStatus::Refused;
    rep.message = "the variance bounds need d >= 3";
    return rep;
  }
  if (cfg.plane_mode != PlaneMode::FixedSeeded) {
    rep.status = CheckStatus::Refused;
    rep.message = "the variance bounds hold for a fixed plane";
    return rep;
  }
  const auto& s = r.summary.back();
  const theory::MomentPredictions p = theory::predict_moments(cfg.convex_body(), s.t, s.delta, k);
  const double scale = std::pow(s.t, 7) * std::pow(s.delta, 4.0 * cfg.d + 4.0);
  const double v = s.cr.variance / scale;
  const double lo = s.cr.variance_ci.lo / scale;
  const double hi = s.cr.variance_ci.hi / scale;
  const double lb = *p.var_cr_lb / scale;
  const double ub = *p.var_cr_ub / scale;
  const double band_lo = lb * (1.0 - tau);
  const double band_hi = ub * (1.0 + tau);
  rep.set("t", s.t);
  rep.set("normalized_variance", v);
  rep.set("ci_lo", lo);
  rep.set("ci_hi", hi);
  rep.set("lb", lb);
  rep.set("ub", ub);
  rep.set("band_lo", band_lo);
  rep.set("band_hi", band_hi);
  // First-order chaos term of the order-4 U-statistic, t (E D_v cr)^2
  // integrated over W: c_d^2 I3 / 4 at leading order. Diagnostic only.
  rep.set("first_order_term", k.c_d.value * k.c_d.value * k.I3.value / 4.0);
  rep.set("ratio_to_lb", v / lb);
  const bool ok = lo <= band_hi && band_lo <= hi;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  rep.message = fmt::format("Var(cr)/(t^7 delta^(4d+4)) = {:.4g} CI [{:.4g}, {:.4g}] vs band [{:.4g}, {:.4g}]", v, lo,
                            hi, band_lo, band_hi);
  return rep;
}

CheckReport correlation_check(const ExperimentResult& r, const theory::Constants* k, double alpha) {
  CheckReport rep;
  rep.name = "correlation";
  const auto& s = r.summary.back();
  const double rho = s.pearson_cr_stress;
  rep.set("t", s.t);
  rep.set("reps", s.reps);
  if (std::isnan(rho)) {
    rep.status = CheckStatus::Inconclusive;
    rep.message = "cr or stress has zero variance";
    return rep;
  }
  if (s.reps < 100) {
    rep.status = CheckStatus::Refused;
    rep.message = "needs 100 or more replications";
    rep.set("pearson", rho);
    return rep;
  }
  const double p = stats::fisher_z_p_value(rho, static_cast<std::size_t>(s.reps));
  rep.set("pearson", rho);
  rep.set("p_value", p);
  if (!(rho > 0.0 && p < alpha)) {
    rep.status = CheckStatus::Fail;
    rep.message = fmt::format("r = {:.4f}, one-sided p = {:.3g} (alpha {:g})", rho, p, alpha);
    return rep;
  }
  rep.status = CheckStatus::Pass;
  rep.message = fmt::format("r = {:.4f}, one-sided p = {:.3g}", rho, p);
  if (k != nullptr && r.config.d >= 3) {
    const auto pred = theory::predict_moments(r.config.convex_body(), s.t, s.delta, *k);
    if (pred.corr_lb) {
      rep.set("corr_lb", *pred.corr_lb);
      if (rho < 0.5 * *pred.corr_lb) {
        rep.status = CheckStatus::Warn;
        rep.message += fmt::format("; below half the predicted bound {:.4f}", *pred.corr_lb);
      } else {
        rep.message += fmt::format("; predicted bound {:.4f}", *pred.corr_lb);
      }
    }
  }
  return rep;
}

ScalingFit cov_scaling_fit(std::span<const double> t, std::span<const double> cov) {
  if (t.size() != cov.size()) throw std::invalid_argument("cov_scaling_fit: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(cov[i] > 0.0)) throw std::invalid_argument("cov_scaling_fit: values must be positive");
    x.push_back(std::log(t[i]));
    y.push_back(std::log(cov[i]));
  }
  const stats::LinearFit f = stats::ols(x, y);
  return {f.slope, f.slope_std_error, t.size()};
}

CheckReport cov_scaling_check(const ExperimentResult& r, double lo, double hi) {
  CheckReport rep;
  rep.name = "scaling";
  if (r.summary.size() < 4) {
    rep.status = CheckStatus::Refused;
    rep.message = "needs four or more grid points";
    return rep;
  }
  std::vector<double> t, cov_cr, cov_stress;
  for (const auto& s : r.summary) {
    if (!(s.cr.mean > 0.0) || !(s.stress.mean > 0.0) || !(s.cr.variance > 0.0) || !(s.stress.variance > 0.0)) {
      rep.status = CheckStatus::Inconclusive;
      rep.message = fmt::format("degenerate moments at t={:g}", s.t);
      return rep;
    }
    t.push_back(s.t);
    cov_cr.push_back(std::sqrt(s.cr.variance) / s.cr.mean);
    cov_stress.push_back(std::sqrt(s.stress.variance) / s.stress.mean);
  }
  const ScalingFit fc = cov_scaling_fit(t, cov_cr);
  const ScalingFit fs = cov_scaling_fit(t, cov_stress);
  rep.set("slope_cr", fc.slope);
  rep.set("slope_cr_se", fc.slope_std_error);
  rep.set("slope_stress", fs.slope);
  rep.set("slope_stress_se", fs.slope_std_error);
  const double span = t.back() / t.front();
  rep.set("span", span);
  const bool ok = lo <= fc.slope && fc.slope <= hi && lo <= fs.slope && fs.slope <= hi;
  rep.message = fmt::format("slopes cr {:.3f}, stress {:.3f}, band [{:g}, {:g}]", fc.slope, fs.slope, lo, hi);
  if (!ok) {
    rep.status = CheckStatus::Fail;
  } else if (span < 10.0) {
    rep.status = CheckStatus::Warn;
    rep.message += fmt::format("; grid spans a factor {:g}, under one decade", span);
  } else {
    rep.status = CheckStatus::Pass;
  }
  return rep;
}

PlaneSearchReport plane_search(const GeometricGraph& g, int K, RandomStream& rng, WeightKind w, int workers) {
  if (K < 1) throw std::invalid_argument("plane_search: K must be at least 1");
  if (g.dim() < 2) throw std::invalid_argument("plane_search: d must be at least 2");
  const int planes = g.dim() == 2 ? 1 : K;
  const std::uint64_t base = rng.bits();
  PlaneSearchReport rep;
  rep.planes.resize(static_cast<std::size_t>(planes));
  parallel_for(rep.planes.size(), workers, [&](std::size_t i) {
    auto s = RandomStream::derive(base, {stream_tag::kSearch, i});
    PlaneResult& pr = rep.planes[i];
    pr.index = i;
    pr.plane = sample_plane_haar(g.dim(), s);
    pr.cr = crossing_number_of_projection(g, pr.plane).count;
    pr.stress = g.n() >= 2 ? stress_of_projection(g, pr.plane, w) : 0.0;
  });

  std::vector<double> cr, st;
  for (const auto& p : rep.planes) {
    cr.push_back(static_cast<double>(p.cr));
    st.push_back(p.stress);
  }
  for (std::size_t i = 1; i < rep.planes.size(); ++i) {
    if (rep.planes[i].cr < rep.planes[rep.argmin_cr].cr) rep.argmin_cr = i;
    if (rep.planes[i].stress < rep.planes[rep.argmin_stress].stress) rep.argmin_stress = i;
  }
  const auto n = static_cast<std::uint64_t>(g.n());
  const auto m = static_cast<std::uint64_t>(g.m());
  rep.lemma_applies = n >= 1 && m >= 7 * n;
  rep.lemma_floor = n >= 1 ? crossing_lemma_floor(n, m) : 0.0;
  if (rep.lemma_applies && rep.lemma_floor > 0.0) {
    rep.ratio_bound = static_cast<double>(rep.planes[rep.argmin_cr].cr) / rep.lemma_floor;
  }
  rep.correlation = cr.size() >= 2 ? stats::pearson(cr, st) : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> sorted = cr;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  rep.median_cr = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  const double mu = stats::mean(cr);
  if (mu > 0.0) {
    std::size_t low = 0;
    for (double c : cr) low += c <= 0.5 * mu ? 1 : 0;
    rep.low_fraction = static_cast<double>(low) / static_cast<double>(cr.size());
    rep.chebyshev_bound = std::min(1.0, 4.0 * stats::variance(cr) / (mu * mu));
  } else {
    rep.low_fraction = 1.0;
    rep.chebyshev_bound = 1.0;
  }
  return rep;
}

}  // namespace rggcross
