#include "curvlab/identities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvlab::identities {

namespace hs = hypersurface;

namespace {

double hr_at(const hs::PointFrame& f, int r) { return symfun::normalized_hr(f.kappa, r); }

IdentityReport base_report(const hs::SurfaceGeometry& geom, std::string name, double tol) {
  IdentityReport rep;
  rep.name = std::move(name);
  rep.grid_degree = geom.grid().degree;
  rep.tol = tol;
  return rep;
}

void finish_identity(IdentityReport& rep) {
  rep.residual_or_gap = rep.lhs - rep.rhs;
  rep.relative_scale = std::abs(rep.lhs) + std::abs(rep.rhs);
  if (rep.relative_scale == 0.0) rep.relative_scale = 1.0;
  rep.verdict = std::abs(rep.residual_or_gap) <= rep.tol * rep.relative_scale;
}

void finish_inequality(IdentityReport& rep) {
  rep.is_inequality = true;
  rep.residual_or_gap = rep.lhs - rep.rhs;
  rep.relative_scale = std::abs(rep.lhs) + std::abs(rep.rhs);
  if (rep.relative_scale == 0.0) rep.relative_scale = 1.0;
  rep.verdict = rep.residual_or_gap >= -rep.tol * rep.relative_scale;
}

// Flux of the conformal field through the inner totally geodesic boundary
// {t = 0} of the warped collar: h(0)^{n+1} Vol(M). Zero when h(0) = 0.
double inner_boundary_flux(const hs::SurfaceGeometry& geom) {
  if (geom.surface().is_space_form()) return 0.0;
  const auto& w = *geom.surface().warped;
  const int n = geom.n();
  const double fiber_scale =
      w.fiber_kind == ambient::FiberKind::RoundSphere ? std::pow(w.k, -0.5 * n) : 1.0;
  return std::pow(w.h(0.0), n + 1) * fiber_scale * geom.grid().weights.sum();
}

}  // namespace

IdentityReport minkowski_residual(const hs::SurfaceGeometry& geom, int r, double tol) {
  const int n = geom.n();
  if (r < 1 || r > n) throw std::invalid_argument("minkowski_residual: r out of range 1..n");
  if (!geom.surface().is_space_form() && r != 1)
    throw std::invalid_argument("minkowski_residual: warped products support r = 1 only");

  auto rep = base_report(geom, "minkowski_r" + std::to_string(r), tol);
  if (geom.surface().is_space_form()) {
    rep.lhs = geom.integrate([&](int, const hs::PointFrame& f) {
      return f.conformal_f * hr_at(f, r - 1);
    });
    rep.rhs = geom.integrate([&](int, const hs::PointFrame& f) {
      return hr_at(f, r) * f.support;
    });
  } else {
    rep.lhs = geom.integrate([&](int, const hs::PointFrame& f) { return f.conformal_f; });
    rep.rhs = geom.integrate([&](int, const hs::PointFrame& f) {
      return hr_at(f, 1) * f.support;
    });
  }
  finish_identity(rep);
  return rep;
}

IdentityReport generalized_minkowski_gap(const hs::SurfaceGeometry& geom, int r, double tol) {
  const int n = geom.n();
  if (r < 1 || r > n) throw std::invalid_argument("generalized_minkowski_gap: r out of range");
  if (geom.surface().is_space_form())
    throw std::invalid_argument("generalized_minkowski_gap: needs a warped product ambient");

  auto cond = ambient::check_warping_conditions(*geom.surface().warped, 128);
  for (const auto& c : cond.checks) {
    if (!c.pass)
      throw std::domain_error("generalized_minkowski_gap: warping condition " + c.name +
                              " fails (margin " + std::to_string(c.worst_margin) + ")");
  }
  const double margin = geom.starshape_margin();
  if (margin <= 0.0)
    throw std::domain_error("generalized_minkowski_gap: surface is not star-shaped (min support " +
                            std::to_string(margin) + ")");

  auto rep = base_report(geom, "generalized_minkowski_r" + std::to_string(r), tol);
  rep.lhs = geom.integrate([&](int, const hs::PointFrame& f) { return hr_at(f, r) * f.support; });
  rep.rhs = geom.integrate([&](int, const hs::PointFrame& f) {
    return f.conformal_f * hr_at(f, r - 1);
  });
  rep.extra["starshape_margin"] = margin;
  finish_inequality(rep);
  return rep;
}

IdentityReport heintze_karcher_gap(const hs::SurfaceGeometry& geom, double tol) {
  for (int i = 0; i < geom.size(); ++i) {
    const double H = hr_at(geom.frame_at(i), 1);
    if (!(H > 0.0))
      throw std::domain_error("heintze_karcher_gap: mean curvature not positive at node " +
                              std::to_string(i) + " (H = " + std::to_string(H) + ")");
  }
  auto rep = base_report(geom, "heintze_karcher", tol);
  rep.lhs = geom.integrate([&](int, const hs::PointFrame& f) {
    return f.conformal_f / hr_at(f, 1);
  });
  const auto& srf = geom.surface();
  const double np1 = geom.n() + 1;
  double inner;
  if (srf.is_space_form()) {
    const double delta = srf.space_form->delta;
    inner = geom.enclosed_weighted_volume([&](double t) { return ambient::cdelta(delta, t); });
  } else {
    inner = geom.enclosed_weighted_volume([&](double t) { return srf.warped->h_prime(t); });
  }
  rep.rhs = np1 * inner + inner_boundary_flux(geom);
  rep.extra["weighted_enclosed"] = inner;
  finish_inequality(rep);
  return rep;
}

IdentityReport divergence_identity(const hs::SurfaceGeometry& geom, double tol) {
  auto rep = base_report(geom, "divergence", tol);
  rep.lhs = geom.integrate([&](int, const hs::PointFrame& f) { return f.support; });
  const auto& srf = geom.surface();
  const double np1 = geom.n() + 1;
  if (srf.is_space_form()) {
    const double delta = srf.space_form->delta;
    rep.rhs = np1 * geom.enclosed_weighted_volume(
                        [&](double t) { return ambient::cdelta(delta, t); });
  } else {
    rep.rhs = np1 * geom.enclosed_weighted_volume(
                        [&](double t) { return srf.warped->h_prime(t); }) +
              inner_boundary_flux(geom);
  }
  finish_identity(rep);
  return rep;
}

IdentityReport michael_simon_ratio(const hs::SurfaceGeometry& geom, double tol) {
  if (!geom.surface().is_space_form())
    throw std::invalid_argument("michael_simon_ratio: space forms only");
  auto rep = base_report(geom, "michael_simon", tol);
  const int n = geom.n();

  const double area_flat = geom.integrate_flat([](int, const hs::PointFrame&) { return 1.0; });
  const double h_l1_flat = geom.integrate_flat([](int, const hs::PointFrame& f) {
    return std::abs(f.euclid_H);
  });
  rep.lhs = std::pow(area_flat, (n - 1.0) / n);
  rep.rhs = h_l1_flat;
  rep.residual_or_gap = rep.lhs / rep.rhs;  // empirical lower bound for K(n)
  rep.relative_scale = 1.0;
  rep.is_inequality = true;
  rep.verdict = std::isfinite(rep.residual_or_gap) && rep.residual_or_gap > 0.0;

  // the weighted form: V^{-(n+1)/n} against ||H~||_{n+1}^{n+1} in the
  // normalized flat measure
  const double h_pow = geom.integrate_flat([&](int, const hs::PointFrame& f) {
                         return std::pow(std::abs(f.euclid_H), n + 1);
                       }) / area_flat;
  rep.extra["flat_area"] = area_flat;
  rep.extra["volume_power"] = std::pow(area_flat, -(n + 1.0) / n);
  rep.extra["h_norm_power"] = h_pow;
  rep.extra["empirical_constant"] = rep.extra["volume_power"] / h_pow;
  return rep;
}

IdentityReport maclaurin_check(const hs::SurfaceGeometry& geom, int r_max, double tol) {
  auto rep = base_report(geom, "maclaurin_r" + std::to_string(r_max), tol);
  rep.is_inequality = true;
  double worst_step = std::numeric_limits<double>::infinity();
  double worst_gap = std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int i = 0; i < geom.size(); ++i) {
    const auto& f = geom.frame_at(i);
    const auto chain = symfun::maclaurin_chain(f.kappa, r_max);
    const double scale = std::max(std::abs(chain.roots.front()), 1e-30);
    for (size_t s = 0; s + 1 < chain.roots.size(); ++s) {
      worst_step = std::min(worst_step, (chain.roots[s] - chain.roots[s + 1]) / scale);
    }
    for (double g : chain.gaps) worst_gap = std::min(worst_gap, g / (scale * scale));
    if (!chain.monotone || !chain.gaps_nonnegative) ++violations;
  }
  rep.lhs = std::min(worst_step, worst_gap);
  rep.rhs = 0.0;
  rep.residual_or_gap = rep.lhs;
  rep.extra["worst_root_step"] = worst_step;
  rep.extra["worst_newton_gap"] = worst_gap;
  rep.extra["flagged_nodes"] = violations;
  rep.verdict = rep.lhs >= -tol;
  return rep;
}

}  // namespace curvlab::identities
