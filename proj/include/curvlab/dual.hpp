#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace curvlab {

// Second-order forward-mode value: carries value, gradient and Hessian with
// respect to a fixed set of independent variables. Used for all analytic
// derivatives of radius functions, anisotropy integrands and chart maps.
struct D2 {
  double v = 0.0;
  Eigen::VectorXd g;   // gradient
  Eigen::MatrixXd h;   // Hessian (symmetric)

  D2() = default;
  explicit D2(double value, int dim)
      : v(value), g(Eigen::VectorXd::Zero(dim)), h(Eigen::MatrixXd::Zero(dim, dim)) {}

  static D2 constant(double value, int dim) { return D2(value, dim); }
  static D2 variable(double value, int dim, int index) {
    D2 x(value, dim);
    x.g(index) = 1.0;
    return x;
  }
  int dim() const { return static_cast<int>(g.size()); }
};

inline D2 operator+(const D2& a, const D2& b) {
  D2 r(a.v + b.v, a.dim());
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}
inline D2 operator-(const D2& a, const D2& b) {
  D2 r(a.v - b.v, a.dim());
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}
inline D2 operator-(const D2& a) {
  D2 r(-a.v, a.dim());
  r.g = -a.g;
  r.h = -a.h;
  return r;
}
inline D2 operator*(const D2& a, const D2& b) {
  D2 r(a.v * b.v, a.dim());
  r.g = a.g * b.v + b.g * a.v;
  r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}
inline D2 operator+(const D2& a, double c) { D2 r = a; r.v += c; return r; }
inline D2 operator+(double c, const D2& a) { return a + c; }
inline D2 operator-(const D2& a, double c) { D2 r = a; r.v -= c; return r; }
inline D2 operator-(double c, const D2& a) { return (-a) + c; }
inline D2 operator*(const D2& a, double c) {
  D2 r(a.v * c, a.dim());
  r.g = a.g * c;
  r.h = a.h * c;
  return r;
}
inline D2 operator*(double c, const D2& a) { return a * c; }

// chain rule for a scalar map f applied to u: needs f(u), f'(u), f''(u)
inline D2 apply_scalar(const D2& u, double f, double fp, double fpp) {
  D2 r(f, u.dim());
  r.g = fp * u.g;
  r.h = fp * u.h + fpp * (u.g * u.g.transpose());
  return r;
}

inline D2 inv(const D2& a) { return apply_scalar(a, 1.0 / a.v, -1.0 / (a.v * a.v), 2.0 / (a.v * a.v * a.v)); }
inline D2 operator/(const D2& a, const D2& b) { return a * inv(b); }
inline D2 operator/(const D2& a, double c) { return a * (1.0 / c); }
inline D2 operator/(double c, const D2& a) { return inv(a) * c; }

inline D2 sqrt(const D2& a) {
  const double s = std::sqrt(a.v);
  return apply_scalar(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline D2 exp(const D2& a) {
  const double e = std::exp(a.v);
  return apply_scalar(a, e, e, e);
}
inline D2 log(const D2& a) { return apply_scalar(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline D2 sin(const D2& a) { return apply_scalar(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline D2 cos(const D2& a) { return apply_scalar(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline D2 sinh(const D2& a) { return apply_scalar(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
inline D2 cosh(const D2& a) { return apply_scalar(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }
inline D2 tan(const D2& a) {
  const double t = std::tan(a.v);
  const double s = 1.0 + t * t;
  return apply_scalar(a, t, s, 2.0 * t * s);
}
inline D2 atan(const D2& a) {
  const double d = 1.0 + a.v * a.v;
  return apply_scalar(a, std::atan(a.v), 1.0 / d, -2.0 * a.v / (d * d));
}
inline D2 tanh(const D2& a) {
  const double t = std::tanh(a.v);
  return apply_scalar(a, t, 1.0 - t * t, -2.0 * t * (1.0 - t * t));
}
inline D2 pow(const D2& a, double p) {
  return apply_scalar(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0),
                      p * (p - 1.0) * std::pow(a.v, p - 2.0));
}

// Composition u(theta) = f(x(theta)) where f is known through its value,
// gradient and Hessian at x, and each component x_i is a D2 in theta.
inline D2 compose(double f, const Eigen::VectorXd& fg, const Eigen::MatrixXd& fh,
                  const std::vector<D2>& x) {
  if (x.empty()) throw std::invalid_argument("compose: empty argument list");
  const int dim = x[0].dim();
  const int m = static_cast<int>(x.size());
  D2 r(f, dim);
  for (int i = 0; i < m; ++i) {
    r.g += fg(i) * x[i].g;
    r.h += fg(i) * x[i].h;
    for (int j = 0; j < m; ++j) r.h += fh(i, j) * (x[i].g * x[j].g.transpose());
  }
  return r;
}

}  // namespace curvlab
