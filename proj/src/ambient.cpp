#include "curvlab/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace curvlab::ambient {

double cdelta(double delta, double t) {
  if (t < 0.0) throw std::domain_error("cdelta: t must be >= 0");
  if (delta > 0.0) {
    if (t >= M_PI / std::sqrt(delta)) throw std::domain_error("cdelta: t outside validity range");
    return std::cos(std::sqrt(delta) * t);
  }
  if (delta == 0.0) return 1.0;
  return std::cosh(std::sqrt(-delta) * t);
}

double sdelta(double delta, double t) {
  if (t < 0.0) throw std::domain_error("sdelta: t must be >= 0");
  if (delta > 0.0) {
    if (t >= M_PI / std::sqrt(delta)) throw std::domain_error("sdelta: t outside validity range");
    return std::sin(std::sqrt(delta) * t) / std::sqrt(delta);
  }
  if (delta == 0.0) return t;
  return std::sinh(std::sqrt(-delta) * t) / std::sqrt(-delta);
}

double conformal_factor(double delta, const Eigen::VectorXd& x) {
  if (delta == 0.0) return 0.0;
  const double q = 1.0 + delta * x.squaredNorm();
  if (q <= 0.0) throw std::domain_error("conformal_factor: point outside model domain");
  return std::log(2.0 / q);
}

Eigen::VectorXd conformal_factor_gradient(double delta, const Eigen::VectorXd& x) {
  if (delta == 0.0) return Eigen::VectorXd::Zero(x.size());
  const double q = 1.0 + delta * x.squaredNorm();
  if (q <= 0.0) throw std::domain_error("conformal_factor_gradient: point outside model domain");
  return (-2.0 * delta / q) * x;
}

double model_radius(double delta, double rho) {
  if (rho < 0.0) throw std::domain_error("model_radius: rho must be >= 0");
  if (delta == 0.0) return rho;
  const double R = 1.0 / std::sqrt(std::abs(delta));
  if (delta < 0.0) return R * std::tanh(0.5 * rho / R);
  if (rho >= M_PI * R) throw std::domain_error("model_radius: rho beyond antipode");
  return R * std::tan(0.5 * rho / R);
}

double geodesic_radius(double delta, double s) {
  if (s < 0.0) throw std::domain_error("geodesic_radius: s must be >= 0");
  if (delta == 0.0) return s;
  const double R = 1.0 / std::sqrt(std::abs(delta));
  if (delta < 0.0) {
    if (s >= R) throw std::domain_error("geodesic_radius: point outside model ball");
    return 2.0 * R * std::atanh(s / R);
  }
  return 2.0 * R * std::atan(s / R);
}

namespace {

// embedding into the quadric model in R^{dim+1} (delta != 0)
Eigen::VectorXd embed(const SpaceForm& sf, const Eigen::VectorXd& x) {
  const double R = 1.0 / std::sqrt(std::abs(sf.delta));
  const double s2 = x.squaredNorm();
  Eigen::VectorXd P(sf.dim + 1);
  if (sf.delta > 0.0) {
    P.head(sf.dim) = (2.0 * R * R / (R * R + s2)) * x;
    P(sf.dim) = R * (s2 - R * R) / (s2 + R * R);
  } else {
    const double den = R * R - s2;
    if (den <= 0.0) throw std::domain_error("embed: point outside model ball");
    P.head(sf.dim) = (2.0 * R * R / den) * x;
    P(sf.dim) = R * (R * R + s2) / den;
  }
  return P;
}

Eigen::VectorXd unembed(const SpaceForm& sf, const Eigen::VectorXd& P) {
  const double R = 1.0 / std::sqrt(std::abs(sf.delta));
  if (sf.delta > 0.0) return P.head(sf.dim) * (R / (R - P(sf.dim)));
  return P.head(sf.dim) * (R / (R + P(sf.dim)));
}

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const long m = a.size() - 1;
  return a.head(m).dot(b.head(m)) - a(m) * b(m);
}

}  // namespace

double geodesic_distance(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != sf.dim || q.size() != sf.dim)
    throw std::domain_error("geodesic_distance: wrong point dimension");
  if (sf.delta == 0.0) return (p - q).norm();
  const double R = 1.0 / std::sqrt(std::abs(sf.delta));
  const Eigen::VectorXd P = embed(sf, p), Q = embed(sf, q);
  if (sf.delta > 0.0) {
    const double c = std::clamp(P.dot(Q) / (R * R), -1.0, 1.0);
    return R * std::acos(c);
  }
  const double c = std::max(1.0, -minkowski(P, Q) / (R * R));
  return R * std::acosh(c);
}

Eigen::VectorXd exp_map(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& v) {
  if (sf.delta == 0.0) return p + v;
  const double R = 1.0 / std::sqrt(std::abs(sf.delta));
  const Eigen::VectorXd P = embed(sf, p);
  const double len = sf.delta > 0.0 ? v.norm() : std::sqrt(std::max(0.0, minkowski(v, v)));
  if (len < 1e-300) return p;
  const Eigen::VectorXd u = v / len;
  Eigen::VectorXd Q;
  if (sf.delta > 0.0)
    Q = std::cos(len / R) * P + std::sin(len / R) * R * u;
  else
    Q = std::cosh(len / R) * P + std::sinh(len / R) * R * u;
  return unembed(sf, Q);
}

Eigen::VectorXd log_map(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (sf.delta == 0.0) return q - p;
  const double R = 1.0 / std::sqrt(std::abs(sf.delta));
  const Eigen::VectorXd P = embed(sf, p), Q = embed(sf, q);
  const double d = geodesic_distance(sf, p, q);
  if (d < 1e-300) return Eigen::VectorXd::Zero(sf.dim + 1);
  Eigen::VectorXd w;
  if (sf.delta > 0.0)
    w = Q - std::cos(d / R) * P;
  else
    w = Q - std::cosh(d / R) * P;
  double wn;
  if (sf.delta > 0.0)
    wn = w.norm();
  else
    wn = std::sqrt(std::max(0.0, minkowski(w, w)));
  if (wn < 1e-300) return Eigen::VectorXd::Zero(sf.dim + 1);
  return (d / wn) * w;
}

WarpedProduct make_cosh_warped(double t0, int fiber_dim, double k) {
  WarpedProduct w;
  w.t0 = t0;
  w.h = [](double t) { return std::cosh(t); };
  w.h_prime = [](double t) { return std::sinh(t); };
  w.h_second = [](double t) { return std::cosh(t); };
  w.fiber_kind = FiberKind::RoundSphere;
  w.k = k;
  w.fiber_dim = fiber_dim;
  w.name = "cosh";
  return w;
}

WarpedProduct make_polynomial_warped(double t0, double c0, double c2, double c4, int fiber_dim, double k) {
  WarpedProduct w;
  w.t0 = t0;
  w.h = [=](double t) { return c0 + c2 * t * t + c4 * t * t * t * t; };
  w.h_prime = [=](double t) { return 2.0 * c2 * t + 4.0 * c4 * t * t * t; };
  w.h_second = [=](double t) { return 2.0 * c2 + 12.0 * c4 * t * t; };
  w.fiber_kind = FiberKind::RoundSphere;
  w.k = k;
  w.fiber_dim = fiber_dim;
  w.name = "polynomial";
  return w;
}

namespace {

// cubic spline with not-a-knot ends (a natural spline forces h'' = 0 at the
// boundary, which falsifies the axis condition h''(0) > 0 on smooth data)
struct CubicSpline {
  std::vector<double> x, y, m;  // m: second derivatives at the knots

  CubicSpline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw std::invalid_argument("CubicSpline: need at least 4 samples");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
      const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
      A(i, i - 1) = hl / 6.0;
      A(i, i) = (hl + hr) / 3.0;
      A(i, i + 1) = hr / 6.0;
      d[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
    }
    // not-a-knot: the third derivative is continuous across the first and
    // last interior knots
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    A(0, 0) = h1;
    A(0, 1) = -(h0 + h1);
    A(0, 2) = h0;
    const double hm = x[n - 2] - x[n - 3], he = x[n - 1] - x[n - 2];
    A(n - 1, n - 3) = he;
    A(n - 1, n - 2) = -(hm + he);
    A(n - 1, n - 1) = hm;
    const Eigen::VectorXd sol = A.partialPivLu().solve(d);
    m.assign(sol.data(), sol.data() + n);
  }

  int segment(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    int i = static_cast<int>(it - x.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x.size()) - 2);
  }
  double eval(double t) const {
    const int i = segment(t);
    const double hseg = x[i + 1] - x[i], A = (x[i + 1] - t) / hseg, B = (t - x[i]) / hseg;
    return A * y[i] + B * y[i + 1] +
           ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * hseg * hseg / 6.0;
  }
  double deriv(double t) const {
    const int i = segment(t);
    const double hseg = x[i + 1] - x[i], A = (x[i + 1] - t) / hseg, B = (t - x[i]) / hseg;
    return (y[i + 1] - y[i]) / hseg - (3.0 * A * A - 1.0) * hseg * m[i] / 6.0 +
           (3.0 * B * B - 1.0) * hseg * m[i + 1] / 6.0;
  }
  double second(double t) const {
    const int i = segment(t);
    const double hseg = x[i + 1] - x[i], A = (x[i + 1] - t) / hseg, B = (t - x[i]) / hseg;
    return A * m[i] + B * m[i + 1];
  }
};

}  // namespace

WarpedProduct make_tabulated_warped(const std::vector<double>& t, const std::vector<double>& h,
                                    FiberKind fiber, double k, int fiber_dim) {
  if (t.size() != h.size()) throw std::invalid_argument("make_tabulated_warped: size mismatch");
  auto spline = std::make_shared<CubicSpline>(t, h);
  WarpedProduct w;
  w.t0 = t.back();
  w.h = [spline](double s) { return spline->eval(s); };
  w.h_prime = [spline](double s) { return spline->deriv(s); };
  w.h_second = [spline](double s) { return spline->second(s); };
  w.fiber_kind = fiber;
  w.k = k;
  w.fiber_dim = fiber_dim;
  w.name = "tabulated";
  return w;
}

bool ConditionReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ConditionReport check_warping_conditions(const WarpedProduct& w, int grid_size) {
  if (grid_size < 16) throw std::domain_error("check_warping_conditions: grid_size must be >= 16");
  const int n = w.fiber_dim;
  std::vector<double> t(grid_size), hv(grid_size), hp(grid_size), hs(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    t[i] = w.t0 * (i + 0.5) / (grid_size + 1);
    hv[i] = w.h(t[i]);
    hp[i] = w.h_prime(t[i]);
    hs[i] = w.h_second(t[i]);
    if (!std::isfinite(hv[i]) || !std::isfinite(hp[i]) || !std::isfinite(hs[i]))
      throw std::runtime_error("check_warping_conditions: non-finite warping data");
  }

  ConditionReport rep;
  {
    ConditionCheck c{"H1", false, 0.0, 0.0};
    const double hp0 = w.h_prime(0.0), hs0 = w.h_second(0.0);
    // relative slope tolerance: tabulated warpings carry interpolation error
    double hp_scale = 1.0;
    for (int i = 0; i < grid_size; ++i) hp_scale = std::max(hp_scale, std::abs(hp[i]));
    const double slope_tol = 1e-6 * hp_scale;
    c.pass = std::abs(hp0) <= slope_tol && hs0 > 0.0;
    c.worst_margin = std::abs(hp0) > slope_tol ? -std::abs(hp0) : hs0;
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c{"H2", true, std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i < grid_size; ++i)
      if (hp[i] < c.worst_margin) {
        c.worst_margin = hp[i];
        c.worst_location = t[i];
      }
    c.pass = c.worst_margin > 0.0;
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c{"H3", true, std::numeric_limits<double>::infinity(), 0.0};
    auto q3 = [&](int i) {
      return 2.0 * hs[i] / hv[i] - (n - 1) * (w.k - hp[i] * hp[i]) / (hv[i] * hv[i]);
    };
    double scale = 0.0;
    for (int i = 0; i < grid_size; ++i) scale = std::max(scale, std::abs(q3(i)));
    for (int i = 0; i + 1 < grid_size; ++i) {
      const double diff = q3(i + 1) - q3(i);
      if (diff < c.worst_margin) {
        c.worst_margin = diff;
        c.worst_location = t[i];
      }
    }
    c.pass = c.worst_margin >= -1e-9 * std::max(1.0, scale);
    rep.checks.push_back(c);
  }
  {
    ConditionCheck c{"H4", true, std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 0; i < grid_size; ++i) {
      const double q = hs[i] / hv[i] + (w.k - hp[i] * hp[i]) / (hv[i] * hv[i]);
      if (q < c.worst_margin) {
        c.worst_margin = q;
        c.worst_location = t[i];
      }
    }
    c.pass = c.worst_margin > 0.0;
    rep.checks.push_back(c);
  }
  return rep;
}

D2 warp_d2(const WarpedProduct& w, const D2& u) {
  return apply_scalar(u, w.h(u.v), w.h_prime(u.v), w.h_second(u.v));
}

}  // namespace curvlab::ambient
