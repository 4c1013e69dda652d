#include "curvlab/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curvlab::hypersurface {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double sphere_volume(int n) {
  // Vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

namespace {

// Gauss-Legendre nodes and weights on (-1,1), Newton on the recurrence.
void gauss_legendre(int m, VectorXd& x, VectorXd& w) {
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x(i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

struct Rule1D {
  VectorXd theta;   // angle nodes
  VectorXd weight;  // weights including the sin^p density
};

// quadrature for integral over (0,pi) against sin^p(theta) d theta
Rule1D polar_rule(int m, int p) {
  Rule1D r;
  VectorXd x, w;
  gauss_legendre(m, x, w);
  r.theta.resize(m);
  r.weight.resize(m);
  if (p % 2 == 1) {
    // substitute u = cos(theta): density becomes the polynomial (1-u^2)^{(p-1)/2}
    for (int i = 0; i < m; ++i) {
      r.theta(i) = std::acos(x(i));
      r.weight(i) = w(i) * std::pow(1.0 - x(i) * x(i), (p - 1) / 2);
    }
  } else {
    for (int i = 0; i < m; ++i) {
      const double t = 0.5 * M_PI * (x(i) + 1.0);
      r.theta(i) = t;
      r.weight(i) = 0.5 * M_PI * w(i) * std::pow(std::sin(t), p);
    }
  }
  return r;
}

std::vector<D2> direction_d2(const VectorXd& angles) {
  const int n = static_cast<int>(angles.size());
  std::vector<D2> t(n);
  for (int i = 0; i < n; ++i) t[i] = D2::variable(angles(i), n, i);
  std::vector<D2> x(n + 1, D2::constant(1.0, n));
  // x_1 = cos t_1, x_2 = sin t_1 cos t_2, ..., x_{n+1} = sin t_1 ... sin t_n
  D2 sin_prod = D2::constant(1.0, n);
  for (int i = 0; i < n; ++i) {
    x[i] = sin_prod * cos(t[i]);
    sin_prod = sin_prod * sin(t[i]);
  }
  x[n] = sin_prod;
  return x;
}

double reference_density(int n, const VectorXd& angles) {
  double d = 1.0;
  for (int i = 0; i + 1 < n; ++i) d *= std::pow(std::sin(angles(i)), n - 1 - i);
  return d;
}

D2 eval_on_d2(const ScalarField& f, const std::vector<D2>& x) {
  VectorXd xv(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xv(static_cast<long>(i)) = x[i].v;
  const D2 fx = f.eval(xv);
  return compose(fx.v, fx.g, fx.h, x);
}

D2 model_radius_d2(double delta, const D2& u) {
  if (delta == 0.0) return u;
  const double R = 1.0 / std::sqrt(std::abs(delta));
  if (delta < 0.0) return R * tanh(u * (0.5 / R));
  return R * tan(u * (0.5 / R));
}

}  // namespace

ParamGrid build_grid(int n, int degree) {
  if (n < 2 || n > 4) throw std::domain_error("build_grid: n must be in {2,3,4}");
  if (degree < 6) throw std::domain_error("build_grid: degree must be >= 6");
  ParamGrid g;
  g.n = n;
  g.degree = degree;
  std::vector<Rule1D> polar(n - 1);
  for (int i = 0; i < n - 1; ++i) polar[i] = polar_rule(degree, n - 1 - i);
  const int K = 2 * degree;
  long total = K;
  for (const auto& r : polar) total *= r.theta.size();
  g.angles.resize(total, n);
  g.nodes.resize(total, n + 1);
  g.weights.resize(total);
  std::vector<int> idx(n - 1, 0);
  long row = 0;
  while (true) {
    double wpolar = 1.0;
    for (int i = 0; i < n - 1; ++i) wpolar *= polar[i].weight(idx[i]);
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < n - 1; ++i) g.angles(row, i) = polar[i].theta(idx[i]);
      g.angles(row, n - 1) = 2.0 * M_PI * (k + 0.5) / K;
      g.weights(row) = wpolar * (2.0 * M_PI / K);
      ++row;
    }
    int c = n - 2;
    while (c >= 0 && ++idx[c] == polar[c].theta.size()) idx[c--] = 0;
    if (c < 0) break;
  }
  for (long i = 0; i < total; ++i) {
    const auto dir = direction_d2(g.angles.row(i).transpose());
    for (int j = 0; j <= n; ++j) g.nodes(i, j) = dir[j].v;
  }
  return g;
}

ParamGrid build_torus_grid(int n, int degree) {
  if (n < 1 || n > 3) throw std::domain_error("build_torus_grid: n must be in {1,2,3}");
  if (degree < 6) throw std::domain_error("build_torus_grid: degree must be >= 6");
  ParamGrid g;
  g.n = n;
  g.degree = degree;
  g.torus = true;
  const int K = 2 * degree;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= K;
  g.angles.resize(total, n);
  g.weights.setConstant(total, std::pow(2.0 * M_PI / K, n));
  std::vector<int> idx(n, 0);
  for (long row = 0; row < total; ++row) {
    for (int i = 0; i < n; ++i) g.angles(row, i) = 2.0 * M_PI * (idx[i] + 0.5) / K;
    int c = n - 1;
    while (c >= 0 && ++idx[c] == K) idx[c--] = 0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// scalar field families

namespace {

class ConstantField final : public ScalarField {
 public:
  explicit ConstantField(double c) : c_(c) {}
  D2 eval(const VectorXd& x) const override { return D2::constant(c_, static_cast<int>(x.size())); }

 private:
  double c_;
};

D2 poly_eval(const std::vector<MonomialTerm>& terms, const std::vector<D2>& x) {
  const int dim = x.empty() ? 0 : x[0].dim();
  D2 acc = D2::constant(0.0, dim);
  for (const auto& t : terms) {
    D2 prod = D2::constant(t.coeff, dim);
    for (std::size_t i = 0; i < t.powers.size() && i < x.size(); ++i)
      for (int p = 0; p < t.powers[i]; ++p) prod = prod * x[i];
    acc = acc + prod;
  }
  return acc;
}

std::vector<D2> seed_variables(const VectorXd& x) {
  std::vector<D2> v(x.size());
  for (long i = 0; i < x.size(); ++i) v[i] = D2::variable(x(i), static_cast<int>(x.size()), static_cast<int>(i));
  return v;
}

class PolynomialField final : public ScalarField {
 public:
  explicit PolynomialField(std::vector<MonomialTerm> t) : terms_(std::move(t)) {}
  D2 eval(const VectorXd& x) const override { return poly_eval(terms_, seed_variables(x)); }

 private:
  std::vector<MonomialTerm> terms_;
};

class PerturbedSphereField final : public ScalarField {
 public:
  PerturbedSphereField(double rho, double amp, std::vector<MonomialTerm> t)
      : rho_(rho), amp_(amp), terms_(std::move(t)) {}
  D2 eval(const VectorXd& x) const override {
    return (poly_eval(terms_, seed_variables(x)) * amp_ + 1.0) * rho_;
  }

 private:
  double rho_, amp_;
  std::vector<MonomialTerm> terms_;
};

class EllipsoidRadiusField final : public ScalarField {
 public:
  explicit EllipsoidRadiusField(VectorXd axes) : axes_(std::move(axes)) {}
  D2 eval(const VectorXd& x) const override {
    if (x.size() != axes_.size()) throw std::invalid_argument("ellipsoid_radius: dimension mismatch");
    auto v = seed_variables(x);
    const int dim = static_cast<int>(x.size());
    D2 num = D2::constant(0.0, dim), den = D2::constant(0.0, dim);
    for (long i = 0; i < x.size(); ++i) {
      num = num + v[i] * v[i];
      den = den + v[i] * v[i] * (1.0 / (axes_(i) * axes_(i)));
    }
    return sqrt(num / den);
  }

 private:
  VectorXd axes_;
};

class OffsetSphereField final : public ScalarField {
 public:
  OffsetSphereField(double radius, VectorXd center) : radius_(radius), center_(std::move(center)) {
    if (center_.norm() >= radius_)
      throw std::domain_error("offset_sphere_radius: origin outside the sphere");
  }
  D2 eval(const VectorXd& x) const override {
    auto v = seed_variables(x);
    const int dim = static_cast<int>(x.size());
    D2 norm2 = D2::constant(0.0, dim), dotc = D2::constant(0.0, dim);
    for (long i = 0; i < x.size(); ++i) {
      norm2 = norm2 + v[i] * v[i];
      if (i < center_.size()) dotc = dotc + v[i] * center_(i);
    }
    const D2 proj = dotc / sqrt(norm2);
    return proj + sqrt(proj * proj + (radius_ * radius_ - center_.squaredNorm()));
  }

 private:
  double radius_;
  VectorXd center_;
};

}  // namespace

FieldPtr constant_field(double c) { return std::make_shared<ConstantField>(c); }
FieldPtr ellipsoid_radius(const VectorXd& semi_axes) { return std::make_shared<EllipsoidRadiusField>(semi_axes); }
FieldPtr polynomial_field(const std::vector<MonomialTerm>& poly) { return std::make_shared<PolynomialField>(poly); }
FieldPtr perturbed_sphere_radius(double rho, double amplitude, const std::vector<MonomialTerm>& poly) {
  return std::make_shared<PerturbedSphereField>(rho, amplitude, poly);
}
FieldPtr offset_sphere_radius(double radius, const VectorXd& center) {
  return std::make_shared<OffsetSphereField>(radius, center);
}

RadialGraph make_space_form_surface(const ambient::SpaceForm& sf, FieldPtr radius) {
  RadialGraph s;
  s.space_form = sf;
  s.radius = std::move(radius);
  s.n = sf.n();
  return s;
}

RadialGraph make_warped_surface(const ambient::WarpedProduct& w, FieldPtr height) {
  RadialGraph s;
  s.warped = w;
  s.radius = std::move(height);
  s.n = w.fiber_dim;
  return s;
}

// ---------------------------------------------------------------------------
// frame construction

SurfaceGeometry::SurfaceGeometry(RadialGraph surface, ParamGrid grid)
    : surface_(std::move(surface)), grid_(std::move(grid)) {
  if (surface_.is_space_form() && grid_.torus)
    throw std::invalid_argument("SurfaceGeometry: space-form surface needs a spherical grid");
  frames_.resize(grid_.size());
  if (surface_.is_space_form())
    build_space_form_frames();
  else
    build_warped_frames();
}

namespace {

VectorXd unit_normal(const MatrixXd& jac) {
  // kernel of the tangent map: right singular vector of the smallest singular value
  Eigen::JacobiSVD<MatrixXd> svd(jac.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().col(jac.rows() - 1);
}

}  // namespace

void SurfaceGeometry::build_space_form_frames() {
  const int n = surface_.n;
  const double delta = surface_.space_form->delta;
  for (int node = 0; node < grid_.size(); ++node) {
    const VectorXd ang = grid_.angles.row(node).transpose();
    const auto dir = direction_d2(ang);
    const D2 u = eval_on_d2(*surface_.radius, dir);
    if (u.v <= 0.0) throw std::runtime_error("RadialGraph: radius not positive at a node");
    if (delta > 0.0 && u.v >= 0.5 * M_PI / std::sqrt(delta))
      throw std::runtime_error("RadialGraph: surface leaves the open half-sphere");
    const D2 mr = model_radius_d2(delta, u);

    std::vector<D2> Y(n + 1);
    for (int i = 0; i <= n; ++i) Y[i] = mr * dir[i];

    PointFrame& f = frames_[node];
    f.position.resize(n + 1);
    f.jac.resize(n + 1, n);
    for (int i = 0; i <= n; ++i) {
      f.position(i) = Y[i].v;
      f.jac.row(i) = Y[i].g.transpose();
    }
    MatrixXd gE = f.jac.transpose() * f.jac;  // flat-model first fundamental form
    const double detE = gE.determinant();
    if (!(detE > 1e-30)) throw std::runtime_error("frame: degenerate metric (non-immersed point)");

    VectorXd N = unit_normal(f.jac);
    const VectorXd xhat = f.position.normalized();
    if (N.dot(xhat) < 0.0) N = -N;

    // b(X,Y) = <grad_X nu, Y> = -<nu, partial^2 Y>; positive on spheres with
    // the outward normal
    MatrixXd hE(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int i = 0; i <= n; ++i) s += Y[i].h(a, b) * N(i);
        hE(a, b) = -s;
      }

    const double phi = ambient::conformal_factor(delta, f.position);
    const double ephi = std::exp(phi);
    const VectorXd gphi = ambient::conformal_factor_gradient(delta, f.position);
    const double dphiN = gphi.dot(N);

    MatrixXd h_eff = hE + dphiN * gE;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> eig(h_eff, gE);
    VectorXd kap = eig.eigenvalues() / ephi;

    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> eigE(hE, gE);

    f.euclid_metric = gE;
    f.euclid_second = hE;
    f.euclid_normal = N;
    f.euclid_H = eigE.eigenvalues().mean();
    const double refd = reference_density(n, ang);
    f.euclid_ratio = std::sqrt(detE) / refd;

    f.metric = ephi * ephi * gE;
    f.second_form = ephi * h_eff;
    f.normal = N / ephi;
    f.kappa = symfun::CurvatureVector(kap);
    f.rho = ambient::geodesic_radius(delta, f.position.norm());
    f.support = ambient::sdelta(delta, f.rho) * xhat.dot(N);
    f.conformal_f = ambient::cdelta(delta, f.rho);
    f.measure_ratio = std::pow(ephi, n) * f.euclid_ratio;
  }
}

void SurfaceGeometry::build_warped_frames() {
  const auto& w = *surface_.warped;
  const int n = surface_.n;
  const double fiber_radius =
      w.fiber_kind == ambient::FiberKind::RoundSphere ? 1.0 / std::sqrt(w.k) : 0.0;
  for (int node = 0; node < grid_.size(); ++node) {
    const VectorXd ang = grid_.angles.row(node).transpose();
    D2 u;
    MatrixXd sigma(n, n);
    std::vector<MatrixXd> christoffel_lower;  // [d](a,b) = <partial_d y, partial_a partial_b y>
    MatrixXd jac_fiber;
    if (w.fiber_kind == ambient::FiberKind::RoundSphere) {
      const auto dir = direction_d2(ang);
      std::vector<D2> y(n + 1);
      for (int i = 0; i <= n; ++i) y[i] = dir[i] * fiber_radius;
      jac_fiber.resize(n + 1, n);
      for (int i = 0; i <= n; ++i) jac_fiber.row(i) = y[i].g.transpose();
      sigma = jac_fiber.transpose() * jac_fiber;
      christoffel_lower.assign(n, MatrixXd::Zero(n, n));
      for (int d = 0; d < n; ++d)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int i = 0; i <= n; ++i) s += y[i].h(a, b) * jac_fiber(i, d);
            christoffel_lower[d](a, b) = s;
          }
      u = eval_on_d2(*surface_.radius, dir);
    } else {
      std::vector<D2> th(n);
      for (int i = 0; i < n; ++i) th[i] = D2::variable(ang(i), n, i);
      sigma = MatrixXd::Identity(n, n);
      christoffel_lower.assign(n, MatrixXd::Zero(n, n));
      u = eval_on_d2(*surface_.radius, th);
    }
    if (u.v <= 0.0 || u.v >= w.t0)
      throw std::runtime_error("RadialGraph: fiber graph leaves (0, t0)");

    const double h = w.h(u.v), hp = w.h_prime(u.v);
    const Eigen::LLT<MatrixXd> sig_llt(sigma);
    const VectorXd grad_u = sig_llt.solve(u.g);  // sigma^{ab} u_b
    const double grad2 = u.g.dot(grad_u);
    const double W = std::sqrt(1.0 + grad2 / (h * h));

    PointFrame& f = frames_[node];
    f.metric = u.g * u.g.transpose() + h * h * sigma;
    MatrixXd hess_cov = u.h;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double corr = 0.0;
        for (int d = 0; d < n; ++d) corr += christoffel_lower[d](a, b) * grad_u(d);
        hess_cov(a, b) -= corr;
      }
    f.second_form = (h * hp * sigma + (2.0 * hp / h) * (u.g * u.g.transpose()) - hess_cov) / W;

    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> eig(f.second_form, f.metric);
    f.kappa = symfun::CurvatureVector(eig.eigenvalues());
    f.support = h / W;
    f.conformal_f = hp;
    f.rho = u.v;
    f.position.resize(n + 1);
    f.position(0) = u.v;
    f.position.tail(n) = ang;
    f.normal.resize(n + 1);
    f.normal(0) = 1.0 / W;
    f.normal.tail(n) = -grad_u / (W * h * h);

    // grid weights carry the unit-sphere density for sphere fibers, 1 for the torus
    const double refd = w.fiber_kind == ambient::FiberKind::RoundSphere
                            ? reference_density(n, ang)
                            : 1.0;
    f.measure_ratio = std::sqrt(f.metric.determinant()) / refd;
  }
}

// ---------------------------------------------------------------------------
// integration and summaries

double SurfaceGeometry::integrate(const std::function<double(int, const PointFrame&)>& field) const {
  double acc = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double v = field(i, frames_[i]);
    if (!std::isfinite(v))
      throw std::runtime_error("integrate: non-finite field value at node " + std::to_string(i));
    acc += grid_.weights(i) * frames_[i].measure_ratio * v;
  }
  return acc;
}

double SurfaceGeometry::integrate_values(const VectorXd& values) const {
  return integrate([&](int i, const PointFrame&) { return values(i); });
}

double SurfaceGeometry::integrate_flat(const std::function<double(int, const PointFrame&)>& field) const {
  if (!surface_.is_space_form())
    throw std::logic_error("integrate_flat: flat-model measure is defined for space forms only");
  double acc = 0.0;
  for (int i = 0; i < size(); ++i)
    acc += grid_.weights(i) * frames_[i].euclid_ratio * field(i, frames_[i]);
  return acc;
}

double SurfaceGeometry::area() const {
  return integrate([](int, const PointFrame&) { return 1.0; });
}

double SurfaceGeometry::enclosed_weighted_volume(const std::function<double(double)>& weight) const {
  static VectorXd gx, gw;
  if (gx.size() == 0) gauss_legendre(64, gx, gw);
  const int n = surface_.n;
  double acc = 0.0;
  if (surface_.is_space_form()) {
    const double delta = surface_.space_form->delta;
    for (int i = 0; i < size(); ++i) {
      const double smax = frames_[i].position.norm();
      double ray = 0.0;
      for (int q = 0; q < gx.size(); ++q) {
        const double s = 0.5 * smax * (gx(q) + 1.0);
        const double ephi = delta == 0.0 ? 1.0 : 2.0 / (1.0 + delta * s * s);
        const double rho = ambient::geodesic_radius(delta, s);
        ray += 0.5 * smax * gw(q) * weight(rho) * std::pow(ephi, n + 1) * std::pow(s, n);
      }
      acc += grid_.weights(i) * ray;
    }
  } else {
    const auto& w = *surface_.warped;
    const double fiber_scale = w.fiber_kind == ambient::FiberKind::RoundSphere
                                   ? std::pow(w.k, -0.5 * n)
                                   : 1.0;
    for (int i = 0; i < size(); ++i) {
      const double tmax = frames_[i].rho;
      double ray = 0.0;
      for (int q = 0; q < gx.size(); ++q) {
        const double t = 0.5 * tmax * (gx(q) + 1.0);
        ray += 0.5 * tmax * gw(q) * weight(t) * std::pow(w.h(t), n);
      }
      acc += grid_.weights(i) * fiber_scale * ray;
    }
  }
  return acc;
}

double SurfaceGeometry::starshape_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : frames_) m = std::min(m, f.support);
  return m;
}

VectorXd SurfaceGeometry::karcher_mean() const {
  if (!surface_.is_space_form())
    throw std::logic_error("karcher_mean: defined for space-form surfaces only");
  const auto& sf = *surface_.space_form;
  const double V = area();
  VectorXd c = VectorXd::Zero(sf.dim);
  for (int i = 0; i < size(); ++i)
    c += grid_.weights(i) * frames_[i].measure_ratio * frames_[i].position;
  c /= V;
  if (sf.delta == 0.0) return c;
  for (int it = 0; it < 100; ++it) {
    VectorXd v = VectorXd::Zero(sf.dim + 1);
    for (int i = 0; i < size(); ++i)
      v += grid_.weights(i) * frames_[i].measure_ratio *
           ambient::log_map(sf, c, frames_[i].position);
    v /= V;
    const VectorXd next = ambient::exp_map(sf, c, v);
    const double step = ambient::geodesic_distance(sf, c, next);
    c = next;
    if (step < 1e-13) return c;
  }
  throw std::runtime_error("karcher_mean: fixed-point iteration did not converge in 100 steps");
}

GeometricSummary SurfaceGeometry::summary() const {
  if (summary_cache_) return *summary_cache_;
  GeometricSummary s;
  s.area = area();
  s.enclosed_volume = enclosed_weighted_volume([](double) { return 1.0; });
  if (surface_.is_space_form()) {
    const double delta = surface_.space_form->delta;
    s.weighted_enclosed = enclosed_weighted_volume([delta](double t) { return ambient::cdelta(delta, t); });
  } else {
    const auto& w = *surface_.warped;
    s.weighted_enclosed = enclosed_weighted_volume([&w](double t) { return w.h_prime(t); });
  }
  for (const auto& f : frames_) {
    s.b_sup_norm = std::max(s.b_sup_norm, f.kappa.values.cwiseAbs().maxCoeff());
    s.b_sup_frobenius = std::max(s.b_sup_frobenius, f.kappa.values.norm());
  }
  if (surface_.is_space_form()) {
    s.center = karcher_mean();
    s.center_valid = true;
    for (const auto& f : frames_)
      s.extrinsic_radius =
          std::max(s.extrinsic_radius, ambient::geodesic_distance(*surface_.space_form, s.center, f.position));
  }
  summary_cache_ = s;
  return s;
}

SphereFit SurfaceGeometry::best_fit_geodesic_sphere() const {
  if (!surface_.is_space_form())
    throw std::logic_error("best_fit_geodesic_sphere: space-form surfaces only");
  const auto& sf = *surface_.space_form;
  const double V = area();
  std::vector<double> wt(size());
  for (int i = 0; i < size(); ++i) wt[i] = grid_.weights(i) * frames_[i].measure_ratio / V;

  auto objective = [&](const VectorXd& c, double& rho_out) {
    double mean = 0.0;
    std::vector<double> d(size());
    for (int i = 0; i < size(); ++i) {
      d[i] = ambient::geodesic_distance(sf, c, frames_[i].position);
      mean += wt[i] * d[i];
    }
    double q = 0.0;
    for (int i = 0; i < size(); ++i) q += wt[i] * (d[i] - mean) * (d[i] - mean);
    rho_out = mean;
    return q;
  };

  SphereFit fit;
  VectorXd c = karcher_mean();
  double rho = 0.0;
  double q = objective(c, rho);
  double step = 0.05 * std::max(rho, 1e-6);
  int iter = 0;
  while (step > 1e-13 && iter < 400) {
    bool improved = false;
    for (int j = 0; j < sf.dim && !improved; ++j) {
      for (double sgn : {+1.0, -1.0}) {
        VectorXd trial = c;
        trial(j) += sgn * step;
        double rho_t = 0.0;
        double q_t;
        try {
          q_t = objective(trial, rho_t);
        } catch (const std::exception&) {
          continue;  // trial left the model domain
        }
        if (q_t < q) {
          c = trial;
          q = q_t;
          rho = rho_t;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
    ++iter;
  }
  fit.center = c;
  fit.rho0 = rho;
  fit.residual = std::sqrt(q);
  fit.converged = step <= 1e-10;
  return fit;
}

double SurfaceGeometry::hausdorff_to_sphere(const VectorXd& center, double rho0) const {
  if (!surface_.is_space_form())
    throw std::logic_error("hausdorff_to_sphere: space-form surfaces only");
  if (rho0 <= 0.0) throw std::domain_error("hausdorff_to_sphere: rho0 must be positive");
  double d = 0.0;
  for (const auto& f : frames_)
    d = std::max(d, std::abs(ambient::geodesic_distance(*surface_.space_form, center, f.position) - rho0));
  return d;
}

}  // namespace curvlab::hypersurface
