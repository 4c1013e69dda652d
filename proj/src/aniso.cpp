#include "curvlab/aniso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvlab::aniso {

namespace hs = hypersurface;

namespace {

std::vector<D2> variables(const Eigen::VectorXd& x) {
  const int dim = static_cast<int>(x.size());
  std::vector<D2> v;
  v.reserve(dim);
  for (int i = 0; i < dim; ++i) v.push_back(D2::variable(x[i], dim, i));
  return v;
}

D2 norm_d2(const std::vector<D2>& x) {
  D2 s = D2::constant(0.0, x[0].dim());
  for (const auto& xi : x) s = s + xi * xi;
  return sqrt(s);
}

class ConstantAniso : public AnisotropyFunction {
 public:
  explicit ConstantAniso(double c) : c_(c) {
    if (!(c > 0.0)) throw std::invalid_argument("anisotropy: constant must be positive");
  }
  D2 extension(const Eigen::VectorXd& x) const override { return norm_d2(variables(x)) * c_; }
  std::string name() const override { return "constant"; }
  hs::FieldPtr wulff_radius() const override { return hs::constant_field(c_); }

 private:
  double c_;
};

class LinearAniso : public AnisotropyFunction {
 public:
  LinearAniso(double c, Eigen::VectorXd v) : c_(c), v_(std::move(v)) {
    if (!(v_.norm() < c_)) throw std::invalid_argument("anisotropy: need |v| < c for positivity");
  }
  D2 extension(const Eigen::VectorXd& x) const override {
    auto xv = variables(x);
    D2 f = norm_d2(xv) * c_;
    for (int i = 0; i < v_.size(); ++i) f = f + xv[i] * v_[i];
    return f;
  }
  std::string name() const override { return "linear"; }
  hs::FieldPtr wulff_radius() const override { return hs::offset_sphere_radius(c_, v_); }

 private:
  double c_;
  Eigen::VectorXd v_;
};

class EllipsoidalAniso : public AnisotropyFunction {
 public:
  explicit EllipsoidalAniso(Eigen::VectorXd a) : a_(std::move(a)) {
    for (int i = 0; i < a_.size(); ++i)
      if (!(a_[i] > 0.0)) throw std::invalid_argument("anisotropy: semi-axes must be positive");
  }
  D2 extension(const Eigen::VectorXd& x) const override {
    auto xv = variables(x);
    D2 s = D2::constant(0.0, static_cast<int>(x.size()));
    for (size_t i = 0; i < xv.size(); ++i) s = s + xv[i] * xv[i] * (a_[i] * a_[i]);
    return sqrt(s);
  }
  std::string name() const override { return "ellipsoidal"; }
  hs::FieldPtr wulff_radius() const override { return hs::ellipsoid_radius(a_); }

 private:
  Eigen::VectorXd a_;
};

void require_flat(const hs::SurfaceGeometry& geom, const char* who) {
  if (!geom.surface().is_space_form() || geom.surface().space_form->delta != 0.0)
    throw std::invalid_argument(std::string(who) + ": flat ambient only");
}

identities::IdentityReport base_report(const hs::SurfaceGeometry& geom, std::string name,
                                       double tol) {
  identities::IdentityReport rep;
  rep.name = std::move(name);
  rep.grid_degree = geom.grid().degree;
  rep.tol = tol;
  return rep;
}

}  // namespace

AnisoPtr constant_anisotropy(double c) { return std::make_shared<ConstantAniso>(c); }
AnisoPtr linear_anisotropy(double c, const Eigen::VectorXd& v) {
  return std::make_shared<LinearAniso>(c, v);
}
AnisoPtr ellipsoidal_anisotropy(const Eigen::VectorXd& semi_axes) {
  return std::make_shared<EllipsoidalAniso>(semi_axes);
}

double convexity_margin(const AnisotropyFunction& F, const hs::ParamGrid& grid) {
  if (grid.nodes.size() == 0) throw std::invalid_argument("convexity_margin: sphere grid needed");
  const int dim = static_cast<int>(grid.nodes.cols());
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const Eigen::MatrixXd M = F.hessian(x);
    if (!M.allFinite()) throw std::domain_error("convexity_margin: non-finite Hessian");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd T = Q.rightCols(dim - 1);  // orthonormal basis of x^perp
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.transpose() * M * T);
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  return margin;
}

Eigen::VectorXd wulff_map(const AnisotropyFunction& F, const Eigen::VectorXd& x) {
  return F.gradient(x / x.norm());
}

std::vector<AnisoFrame> aniso_frames(const hs::SurfaceGeometry& geom,
                                     const AnisotropyFunction& F) {
  require_flat(geom, "aniso_frames");
  const int n = geom.n();
  std::vector<AnisoFrame> out;
  out.reserve(geom.size());
  for (int i = 0; i < geom.size(); ++i) {
    const auto& f = geom.frame_at(i);
    const Eigen::MatrixXd M = F.hessian(f.normal);
    const Eigen::MatrixXd A = f.jac.transpose() * M * f.jac;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("aniso_frames: convexity fails at the normal of node " +
                              std::to_string(i));
    const Eigen::MatrixXd G = f.metric;
    // eigenvalues through the symmetric pencil h v = kappa (G A^{-1} G) v;
    // identical spectrum to S_F = G^{-1} A G^{-1} h but guaranteed real
    const Eigen::MatrixXd B = G * llt.solve(G);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f.second_form, B);
    if (es.info() != Eigen::Success)
      throw std::domain_error("aniso_frames: eigen decomposition failed at node " +
                              std::to_string(i));

    AnisoFrame af;
    const Eigen::MatrixXd Ginv = G.inverse();
    af.SF = Ginv * A * Ginv * f.second_form;
    af.kappaF = symfun::CurvatureVector(es.eigenvalues());
    af.HrF.resize(n + 2);
    for (int r = 0; r <= n + 1; ++r) af.HrF[r] = symfun::normalized_hr(af.kappaF, r);
    af.tauF_sq = symfun::umbilicity_defect(af.kappaF);
    af.F_at_nu = F.value(f.normal);
    out.push_back(std::move(af));
  }
  return out;
}

symfun::MaclaurinChain aniso_maclaurin(const AnisoFrame& frame, int r) {
  const int n = frame.kappaF.n;
  if (r < 1 || r > n) throw std::invalid_argument("aniso_maclaurin: r out of range");
  if (r + 1 <= n && !(frame.HrF[r + 1] > 0.0))
    throw std::domain_error("aniso_maclaurin: H_{r+1} must be positive");
  return symfun::maclaurin_chain(frame.kappaF, r);
}

identities::IdentityReport aniso_minkowski_residual(const hs::SurfaceGeometry& geom,
                                                    const AnisotropyFunction& F, int r,
                                                    double tol) {
  require_flat(geom, "aniso_minkowski_residual");
  if (r < 0 || r > geom.n() - 1)
    throw std::invalid_argument("aniso_minkowski_residual: r out of range 0..n-1");
  const auto frames = aniso_frames(geom, F);
  auto rep = base_report(geom, "aniso_minkowski_r" + std::to_string(r), tol);
  Eigen::VectorXd lhs(geom.size()), rhs(geom.size());
  for (int i = 0; i < geom.size(); ++i) {
    lhs[i] = frames[i].F_at_nu * frames[i].HrF[r];
    rhs[i] = frames[i].HrF[r + 1] * geom.frame_at(i).support;
  }
  rep.lhs = geom.integrate_values(lhs);
  rep.rhs = geom.integrate_values(rhs);
  rep.residual_or_gap = rep.lhs - rep.rhs;
  rep.relative_scale = std::abs(rep.lhs) + std::abs(rep.rhs);
  if (rep.relative_scale == 0.0) rep.relative_scale = 1.0;
  rep.verdict = std::abs(rep.residual_or_gap) <= tol * rep.relative_scale;
  return rep;
}

identities::IdentityReport aniso_hk_gap(const hs::SurfaceGeometry& geom,
                                        const AnisotropyFunction& F, double tol) {
  require_flat(geom, "aniso_hk_gap");
  const auto frames = aniso_frames(geom, F);
  Eigen::VectorXd integrand(geom.size());
  for (int i = 0; i < geom.size(); ++i) {
    const double HF = frames[i].HrF[1];
    if (!(HF > 0.0))
      throw std::domain_error("aniso_hk_gap: anisotropic mean curvature not positive at node " +
                              std::to_string(i));
    integrand[i] = frames[i].F_at_nu / HF;
  }
  auto rep = base_report(geom, "aniso_heintze_karcher", tol);
  rep.is_inequality = true;
  rep.lhs = geom.integrate_values(integrand);
  rep.rhs = (geom.n() + 1) * geom.enclosed_weighted_volume([](double) { return 1.0; });
  rep.residual_or_gap = rep.lhs - rep.rhs;
  rep.relative_scale = std::abs(rep.lhs) + std::abs(rep.rhs);
  rep.verdict = rep.residual_or_gap >= -tol * rep.relative_scale;
  return rep;
}

WulffDistance wulff_distance(const hs::SurfaceGeometry& geom, const AnisotropyFunction& F) {
  require_flat(geom, "wulff_distance");
  hs::FieldPtr rw = F.wulff_radius();
  if (!rw) throw std::invalid_argument("wulff_distance: no closed-form Wulff shape for this F");
  const int n = geom.n();
  const int dim = n + 1;

  hs::SurfaceGeometry wulff(
      hs::make_space_form_surface(ambient::SpaceForm{dim, 0.0}, rw), geom.grid());

  WulffDistance out;
  out.rho_scale = std::pow(geom.area() / wulff.area(), 1.0 / n);

  const auto& grid = geom.grid();
  const int N = grid.size();
  Eigen::VectorXd w(N), phi(N), grad2(N), hess2(N);
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd x = grid.nodes.row(i);
    const D2 rm = geom.surface().radius->eval(x);
    const D2 rwv = rw->eval(x);
    const D2 p = rm / (rwv * out.rho_scale) - 1.0;
    const Eigen::MatrixXd P =
        Eigen::MatrixXd::Identity(dim, dim) - x * x.transpose();
    const Eigen::VectorXd tg = P * p.g;
    const double radial = x.dot(p.g);
    const Eigen::MatrixXd Hs = P * p.h * P - radial * P;  // round covariant Hessian
    w[i] = grid.weights[i] * wulff.frame_at(i).measure_ratio;
    phi[i] = p.v;
    grad2[i] = tg.squaredNorm();
    hess2[i] = Hs.squaredNorm();
  }
  const double W = w.sum();
  const double mean = w.dot(phi) / W;
  double l2 = 0.0, w22 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double d = phi[i] - mean;
    l2 += w[i] * d * d;
    w22 += w[i] * (d * d + grad2[i] + hess2[i]);
  }
  out.l2 = std::sqrt(l2 / W);
  out.w22 = std::sqrt(w22 / W);

  const auto sum = geom.summary();
  out.center_offset = sum.center_valid ? sum.center : Eigen::VectorXd::Zero(dim);
  return out;
}

AnisoSweepResult aniso_stability_sweep(const weingarten::SurfaceFamily& family,
                                       const AnisotropyFunction& F,
                                       const weingarten::WeingartenSpec& spec,
                                       const std::vector<double>& t_values) {
  if (t_values.size() < 2)
    throw std::invalid_argument("aniso_stability_sweep: need >= 2 values");
  for (size_t i = 1; i < t_values.size(); ++i)
    if (!(t_values[i] < t_values[i - 1]))
      throw std::invalid_argument("aniso_stability_sweep: t must be strictly decreasing");

  AnisoSweepResult out;
  for (double t : t_values) {
    hs::SurfaceGeometry geom = family(t);
    spec.validate(geom.n());
    const auto frames = aniso_frames(geom, F);
    const double V = geom.area();
    Eigen::VectorXd abs_eps(geom.size()), sq_eps(geom.size()), tau(geom.size());
    for (int i = 0; i < geom.size(); ++i) {
      const double e =
          frames[i].HrF[spec.r] - spec.a * frames[i].HrF[1] - spec.b;
      abs_eps[i] = std::abs(e);
      sq_eps[i] = e * e;
      tau[i] = frames[i].tauF_sq;
    }
    AnisoSweepRecord rec;
    rec.t = t;
    rec.eps_l1 = geom.integrate_values(abs_eps) / V;
    rec.eps_l2 = std::sqrt(geom.integrate_values(sq_eps) / V);
    rec.tau_probe = geom.integrate_values(tau) / V;
    const auto dist = wulff_distance(geom, F);
    rec.w22 = dist.w22;
    rec.rho_scale = dist.rho_scale;
    rec.ratio = rec.eps_l2 > 0.0 ? rec.w22 / rec.eps_l2 : 0.0;
    out.records.push_back(rec);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& rec : out.records) {
    out.k_hat = std::max(out.k_hat, rec.ratio);
    const double x = std::log(rec.eps_l2), y = std::log(rec.w22);
    if (std::isfinite(x) && std::isfinite(y)) {
      sx += x; sy += y; sxx += x * x; sxy += x * y; ++cnt;
    }
  }
  if (cnt >= 2) out.gamma_hat = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  for (size_t i = 1; i < out.records.size(); ++i) {
    if (out.records[i].eps_l2 > out.records[i - 1].eps_l2 * (1.0 + 1e-9) ||
        out.records[i].w22 > out.records[i - 1].w22 * (1.0 + 1e-9)) {
      out.co_vanish = false;
    }
  }
  return out;
}

}  // namespace curvlab::aniso
