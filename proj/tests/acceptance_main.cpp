// End-to-end acceptance gate: eight independent criteria, one verdict line
// each, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "curvlab/aniso.hpp"
#include "curvlab/identities.hpp"
#include "curvlab/report.hpp"
#include "curvlab/weingarten.hpp"

using namespace curvlab;
using namespace curvlab::hypersurface;
using Eigen::VectorXd;

namespace {

int failures = 0;

void verdict(int idx, const char* label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, label,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++failures;
}

SurfaceGeometry sphere_in(double delta, double rho, int degree = 28) {
  return SurfaceGeometry(
      make_space_form_surface(ambient::SpaceForm{3, delta}, constant_field(rho)),
      build_grid(2, degree));
}

SurfaceGeometry cosh_slice(double t1, int degree = 24) {
  return SurfaceGeometry(make_warped_surface(ambient::make_cosh_warped(3.0, 2, 1.0),
                                             constant_field(t1)),
                         build_grid(2, degree));
}

SurfaceGeometry flat_ellipsoid(double a, double b, double c, int degree = 32) {
  VectorXd ax(3);
  ax << a, b, c;
  return SurfaceGeometry(
      make_space_form_surface(ambient::SpaceForm{3, 0.0}, ellipsoid_radius(ax)),
      build_grid(2, degree));
}

SurfaceGeometry perturbed_sphere(double delta, double rho, double amp,
                                 const std::vector<MonomialTerm>& poly, int degree = 28) {
  return SurfaceGeometry(
      make_space_form_surface(ambient::SpaceForm{3, delta},
                              perturbed_sphere_radius(rho, amp, poly)),
      build_grid(2, degree));
}

SurfaceGeometry perturbed_slice(double t1, double amp,
                                const std::vector<MonomialTerm>& poly, int degree = 28) {
  return SurfaceGeometry(make_warped_surface(ambient::make_cosh_warped(3.0, 2, 1.0),
                                             perturbed_sphere_radius(t1, amp, poly)),
                         build_grid(2, degree));
}

double rel(const identities::IdentityReport& r) {
  return std::abs(r.residual_or_gap) / r.relative_scale;
}

// --------------------------------------------------------------------------

void criterion1() {
  double worst = 0.0;
  std::string where;
  auto track = [&](const identities::IdentityReport& r, const std::string& tag) {
    if (rel(r) > worst) {
      worst = rel(r);
      where = tag;
    }
  };
  for (double delta : {-1.0, 0.0, 0.5}) {
    const auto geom = sphere_in(delta, 0.9);
    for (int r = 1; r <= 2; ++r)
      track(identities::minkowski_residual(geom, r),
            "minkowski_r" + std::to_string(r) + "@delta=" + std::to_string(delta));
    track(identities::divergence_identity(geom), "divergence");
    track(identities::heintze_karcher_gap(geom), "hk");
  }
  {
    const auto slice = cosh_slice(1.0);
    track(identities::minkowski_residual(slice, 1), "minkowski@slice");
    track(identities::divergence_identity(slice), "divergence@slice");
    track(identities::heintze_karcher_gap(slice), "hk@slice");
    for (int r = 1; r <= 2; ++r)
      track(identities::generalized_minkowski_gap(slice, r), "genmink@slice");
  }
  {
    const auto geom = sphere_in(0.0, 1.1);
    const auto F = aniso::constant_anisotropy(1.0);
    for (int r = 0; r <= 1; ++r)
      track(aniso::aniso_minkowski_residual(geom, *F, r), "aniso_minkowski");
    track(aniso::aniso_hk_gap(geom, *F), "aniso_hk");
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst relative residual %.3e (%s)", worst, where.c_str());
  verdict(1, "sphere/slice equality cases at 1e-8", worst <= 1e-8, buf);
}

void criterion2() {
  std::vector<MonomialTerm> h111{{1.0, {1, 1, 1}}};
  std::vector<MonomialTerm> h32{{1.0, {3, 2, 0}}};
  std::vector<MonomialTerm> h2{{1.0, {0, 2, 1}}, {-0.5, {2, 0, 0}}};

  std::vector<SurfaceGeometry> corpus;
  corpus.push_back(flat_ellipsoid(1.5, 1.0, 1.0));
  corpus.push_back(flat_ellipsoid(1.3, 1.1, 0.9));
  corpus.push_back(flat_ellipsoid(1.1, 1.0, 0.8));
  corpus.push_back(flat_ellipsoid(2.0, 1.0, 1.0));
  corpus.push_back(flat_ellipsoid(1.2, 1.2, 0.7));
  corpus.push_back(flat_ellipsoid(1.0, 0.9, 0.8));
  for (double delta : {-1.0, 0.0, 0.5}) {
    corpus.push_back(perturbed_sphere(delta, 0.9, 0.05, h111));
    corpus.push_back(perturbed_sphere(delta, 0.8, 0.03, h32));
    corpus.push_back(perturbed_sphere(delta, 1.0, 0.04, h2));
  }
  corpus.push_back(perturbed_sphere(0.0, 1.2, 0.1, h111));
  const int n_space = static_cast<int>(corpus.size());
  corpus.push_back(perturbed_slice(1.0, 0.05, h111));
  corpus.push_back(perturbed_slice(1.2, 0.03, h32));
  corpus.push_back(perturbed_slice(0.8, 0.04, h2));
  corpus.push_back(perturbed_slice(1.1, 0.08, h111));

  int violations = 0;
  double worst_gap = 1e300;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    const auto& geom = corpus[i];
    const auto hk = identities::heintze_karcher_gap(geom);
    if (hk.residual_or_gap < -1e-6 * hk.relative_scale) ++violations;
    worst_gap = std::min(worst_gap, hk.residual_or_gap / hk.relative_scale);
    if (i >= n_space) {
      for (int r = 1; r <= 2; ++r) {
        const auto gm = identities::generalized_minkowski_gap(geom, r);
        if (gm.residual_or_gap < -1e-6 * gm.relative_scale) ++violations;
        worst_gap = std::min(worst_gap, gm.residual_or_gap / gm.relative_scale);
      }
    }
    if (!identities::maclaurin_check(geom, 2, 1e-6).verdict) ++violations;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu surfaces, %d violations, worst normalized gap %.3e",
                corpus.size(), violations, worst_gap);
  verdict(2, "inequality direction over the corpus", violations == 0 && corpus.size() >= 20, buf);
}

void criterion3() {
  const std::vector<double> axes = {1.40, 1.32, 1.25, 1.18, 1.12, 1.08, 1.04, 1.02, 1.01};
  bool monotone = true;
  double pd = 1e300, pg = 1e300, pf = 1e300;
  for (double a : axes) {
    const auto geom = flat_ellipsoid(a, 1.0, 1.0, 28);
    double defect = 0.0;
    for (const auto& f : geom.frames())
      defect = std::max(defect, symfun::umbilicity_defect(f.kappa));
    const double gap = identities::heintze_karcher_gap(geom).residual_or_gap;
    const double fitres = geom.best_fit_geodesic_sphere().residual;
    if (!(defect < pd && gap < pg && fitres < pf)) monotone = false;
    pd = defect;
    pg = gap;
    pf = fitres;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu points, final defect %.2e, hk gap %.2e, fit residual %.2e",
                axes.size(), pd, pg, pf);
  verdict(3, "rigidity proxy: defect, gap and fit residual co-decrease", monotone, buf);
}

void criterion4() {
  bool ok = true;
  int checked = 0;
  double min_margin = 1e300;
  for (int n = 2; n <= 6 && ok; ++n) {
    for (int r = 2; r <= n && ok; ++r) {
      const auto cn = symfun::estimate_cn(n, r, 1000000, 42);
      std::mt19937_64 rng(977 + 13 * n + r);
      std::uniform_real_distribution<double> uni(0.05, 2.0);
      const int fresh = 66667;  // ~1e6 tuples across the 15 (n, r) pairs
      for (int s = 0; s < fresh; ++s) {
        symfun::CurvatureVector kv;
        kv.n = n;
        kv.values.resize(n);
        for (int i = 0; i < n; ++i) kv.values[i] = uni(rng);
        const auto pg = symfun::pinching_gap(kv, r, cn);
        ++checked;
        const double margin = pg.gap - pg.certified_lower_bound;
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) {
          ok = false;
          break;
        }
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d tuples checked, min (gap - bound) = %.3e",
                checked, min_margin);
  verdict(4, "pinching certificate never exceeds the true gap", ok, buf);
}

struct SweepOutcome {
  weingarten::SweepResult res;
  weingarten::WeingartenSpec spec;
  weingarten::SurfaceFamily family;
};

SweepOutcome run_sweep(double delta) {
  std::vector<MonomialTerm> poly{{1.0, {1, 1, 1}}};
  const double rho = 0.9;
  weingarten::SurfaceFamily family = [delta, rho, poly](double t) {
    return perturbed_sphere(delta, rho, t, poly, 28);
  };
  const double k0 = ambient::cdelta(delta, rho) / ambient::sdelta(delta, rho);
  weingarten::WeingartenSpec spec;
  spec.r = 2;
  spec.a = 0.5;
  spec.b = k0 * k0 - spec.a * k0;
  SweepOutcome out;
  out.res = weingarten::stability_sweep(family, spec,
                                        {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4});
  out.spec = spec;
  out.family = family;
  return out;
}

void criteria56() {
  bool ok5 = true, ok6 = true;
  std::string det5, det6;
  for (double delta : {-1.0, 0.0}) {
    const auto out = run_sweep(delta);
    const auto& res = out.res;
    const auto& first = res.records.front();
    const auto& last = res.records.back();
    bool mono_eps = true, mono_dh = true;
    for (size_t i = 1; i < res.records.size(); ++i) {
      if (res.records[i].eps_l1 >= res.records[i - 1].eps_l1) mono_eps = false;
      if (res.records[i].hausdorff >= res.records[i - 1].hausdorff) mono_dh = false;
    }
    bool bound = true;
    for (const auto& rec : res.records) {
      if (rec.hausdorff >
          res.c_cert * std::pow(rec.eps_l1, res.gamma_cert) * (1.0 + 1e-9))
        bound = false;
    }
    const bool collapse = last.eps_l1 < 1e-3 * first.eps_l1 &&
                          last.hausdorff < 1e-3 * first.hausdorff;
    if (!(mono_eps && mono_dh && collapse && res.gamma_hat > 0.0 && bound)) ok5 = false;
    {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "delta=%g gamma_hat=%.3f eps %.2e->%.2e dH %.2e->%.2e; ", delta,
                    res.gamma_hat, first.eps_l1, last.eps_l1, first.hausdorff,
                    last.hausdorff);
      det5 += buf;
    }

    const auto cn = symfun::estimate_cn(2, 2, 200000, 42);
    double min_slack = 1e300;
    for (const auto& rec : res.records) {
      const auto chain = weingarten::stability_chain(out.family(rec.t), out.spec, cn);
      min_slack = std::min(min_slack, chain.final_rhs - chain.final_lhs);
      if (!chain.chain_ok) ok6 = false;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "delta=%g min final slack %.3e; ", delta, min_slack);
    det6 += buf;
    if (min_slack < 0.0) ok6 = false;
  }
  verdict(5, "stability sweep: monotone collapse with certified rate", ok5, det5);
  verdict(6, "norm-interpolation inequality holds on every sweep point", ok6, det6);
}

void criterion7() {
  bool ok = true;
  std::string det;

  // (a) constant integrand reduces to the isotropic theory
  {
    const auto geom = flat_ellipsoid(1.4, 1.0, 0.9, 24);
    const auto F = aniso::constant_anisotropy(1.0);
    const auto frames = aniso::aniso_frames(geom, *F);
    double worst = 0.0;
    for (int i = 0; i < geom.size(); ++i) {
      const auto& iso = geom.frame_at(i).kappa.values;
      worst = std::max(worst, (frames[i].kappaF.values - iso).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-10) ok = false;
    char buf[80];
    std::snprintf(buf, sizeof buf, "isotropic reduction %.2e; ", worst);
    det += buf;
  }

  // (b) Wulff shape: constant anisotropic curvature and tight HK
  VectorXd ax(3);
  ax << 1.3, 1.0, 0.8;
  const auto F = aniso::ellipsoidal_anisotropy(ax);
  {
    SurfaceGeometry wulff(
        make_space_form_surface(ambient::SpaceForm{3, 0.0}, F->wulff_radius()),
        build_grid(2, 28));
    const auto frames = aniso::aniso_frames(wulff, *F);
    double kmin = 1e300, kmax = -1e300;
    for (const auto& fr : frames) {
      kmin = std::min(kmin, fr.kappaF.values.minCoeff());
      kmax = std::max(kmax, fr.kappaF.values.maxCoeff());
    }
    const auto hk = aniso::aniso_hk_gap(wulff, *F);
    if (kmax - kmin > 1e-8 || rel(hk) > 1e-8) ok = false;
    char buf[100];
    std::snprintf(buf, sizeof buf, "kappaF variation %.2e, hk %.2e; ", kmax - kmin,
                  rel(hk));
    det += buf;
  }

  // (c) four-point co-vanishing sweep with bounded ratio
  {
    std::vector<MonomialTerm> poly{{1.0, {1, 1, 1}}};
    weingarten::SurfaceFamily family = [&](double t) {
      class Perturbed : public ScalarField {
       public:
        Perturbed(FieldPtr base, FieldPtr bump, double t)
            : base_(std::move(base)), bump_(std::move(bump)), t_(t) {}
        D2 eval(const VectorXd& x) const override {
          const int d = static_cast<int>(x.size());
          return base_->eval(x) *
                 (D2::constant(1.0, d) + D2::constant(t_, d) * bump_->eval(x));
        }

       private:
        FieldPtr base_, bump_;
        double t_;
      };
      auto field =
          std::make_shared<Perturbed>(F->wulff_radius(), polynomial_field(poly), t);
      return SurfaceGeometry(
          make_space_form_surface(ambient::SpaceForm{3, 0.0}, field), build_grid(2, 24));
    };
    weingarten::WeingartenSpec spec;
    spec.r = 2;
    spec.a = 0.0;
    spec.b = 1.0;
    const auto res =
        aniso::aniso_stability_sweep(family, *F, spec, {3e-2, 1e-2, 3e-3, 1e-3});
    double rmin = 1e300, rmax = 0.0;
    for (const auto& rec : res.records) {
      rmin = std::min(rmin, rec.ratio);
      rmax = std::max(rmax, rec.ratio);
    }
    const bool bounded = res.co_vanish && std::isfinite(res.k_hat) && rmax / rmin < 10.0;
    if (!bounded) ok = false;
    char buf[120];
    std::snprintf(buf, sizeof buf, "sweep ratio range [%.3e, %.3e]", rmin, rmax);
    det += buf;
  }
  verdict(7, "anisotropic reduction, Wulff rigidity, co-vanishing sweep", ok, det);
}

void criterion8() {
  // ellipsoidal radius fields decay slowly in the spherical-harmonic basis,
  // so degree 20 is far from converged and the doubling gain is visible.
  // the divergence identity is excluded from the ratio: for radial graphs it
  // reduces to an exact per-ray calculus identity, so its residual sits at
  // the rounding floor at every degree (asserted separately below).
  bool ok = true;
  double worst_factor = 1e300;
  std::string worst_tag;
  auto compare = [&](const identities::IdentityReport& coarse,
                     const identities::IdentityReport& fine, const std::string& tag) {
    const double factor = rel(coarse) / std::max(rel(fine), 1e-300);
    if (factor < worst_factor) {
      worst_factor = factor;
      worst_tag = tag;
    }
    if (factor < 1e2) ok = false;
  };

  for (double delta : {-1.0, 0.0}) {
    VectorXd ax(3);
    if (delta == 0.0)
      ax << 1.6, 1.0, 0.85;
    else
      ax << 1.3, 0.8, 0.6;
    SurfaceGeometry coarse(
        make_space_form_surface(ambient::SpaceForm{3, delta}, ellipsoid_radius(ax)),
        build_grid(2, 20));
    SurfaceGeometry fine(
        make_space_form_surface(ambient::SpaceForm{3, delta}, ellipsoid_radius(ax)),
        build_grid(2, 40));
    for (int r = 1; r <= 2; ++r)
      compare(identities::minkowski_residual(coarse, r),
              identities::minkowski_residual(fine, r),
              "minkowski_r" + std::to_string(r) + "@delta=" + std::to_string(delta));
    if (rel(identities::divergence_identity(coarse)) > 1e-13 ||
        rel(identities::divergence_identity(fine)) > 1e-13)
      ok = false;
  }
  {
    VectorXd ax(3);
    ax << 1.4, 1.0, 0.8;
    const auto w = ambient::make_cosh_warped(3.0, 2, 1.0);
    SurfaceGeometry coarse(make_warped_surface(w, ellipsoid_radius(ax)), build_grid(2, 20));
    SurfaceGeometry fine(make_warped_surface(w, ellipsoid_radius(ax)), build_grid(2, 40));
    compare(identities::minkowski_residual(coarse, 1),
            identities::minkowski_residual(fine, 1), "minkowski@warped_graph");
  }
  {
    VectorXd v(3);
    v << 0.15, -0.1, 0.05;
    const auto F = aniso::linear_anisotropy(1.0, v);
    const auto coarse = flat_ellipsoid(1.6, 1.0, 0.85, 20);
    const auto fine = flat_ellipsoid(1.6, 1.0, 0.85, 40);
    for (int r = 0; r <= 1; ++r)
      compare(aniso::aniso_minkowski_residual(coarse, *F, r),
              aniso::aniso_minkowski_residual(fine, *F, r),
              "aniso_minkowski_r" + std::to_string(r));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst improvement factor %.1f (%s)", worst_factor,
                worst_tag.c_str());
  verdict(8, "degree doubling gains two orders on every residual", ok, buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criteria56();
  criterion7();
  criterion8();
  if (failures == 0) {
    std::printf("acceptance: all 8 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return 1;
}
