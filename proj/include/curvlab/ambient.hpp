#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "curvlab/dual.hpp"

namespace curvlab::ambient {

// c_delta / s_delta comparison functions: s' = c, c' = -delta s.
double cdelta(double delta, double t);
double sdelta(double delta, double t);

// Simply connected space form of curvature delta, handled through its
// conformally flat model: Euclidean space for delta = 0, the ball of radius
// 1/sqrt(-delta) with factor 2/(1 + delta |x|^2) for delta < 0, and the
// stereographic plane with the same factor for delta > 0 (restricted to the
// half-sphere, geodesic radius < pi / (2 sqrt(delta))).
struct SpaceForm {
  int dim = 3;  // ambient dimension n+1
  double delta = 0.0;

  int n() const { return dim - 1; }
};

// log of the conformal factor at a model point; phi = 0 identically when delta = 0.
double conformal_factor(double delta, const Eigen::VectorXd& x);
Eigen::VectorXd conformal_factor_gradient(double delta, const Eigen::VectorXd& x);

// model radius <-> geodesic distance to the model origin
double model_radius(double delta, double rho);
double geodesic_radius(double delta, double s);

double geodesic_distance(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// exp / log maps in model coordinates. For delta != 0 the tangent vector is
// expressed in the embedded quadric space (dim+1 components); for delta = 0
// it is an ordinary dim-vector. log_map output feeds exp_map input.
Eigen::VectorXd exp_map(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& v);
Eigen::VectorXd log_map(const SpaceForm& sf, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

enum class FiberKind { RoundSphere, FlatTorus };

// P = [0, t0) x M with metric dt^2 + h(t)^2 g_M; Ric_M >= (n-1) k g_M.
struct WarpedProduct {
  double t0 = 0.0;
  std::function<double(double)> h, h_prime, h_second;
  FiberKind fiber_kind = FiberKind::RoundSphere;
  double k = 1.0;      // fiber Ricci constant
  int fiber_dim = 2;   // n
  std::string name;
};

WarpedProduct make_cosh_warped(double t0, int fiber_dim = 2, double k = 1.0);
// h(t) = c0 + c2 t^2 + c4 t^4 (even polynomial, h'(0) = 0 automatically)
WarpedProduct make_polynomial_warped(double t0, double c0, double c2, double c4,
                                     int fiber_dim = 2, double k = 1.0);
// tabulated warping function with natural cubic spline interpolation
WarpedProduct make_tabulated_warped(const std::vector<double>& t, const std::vector<double>& h,
                                    FiberKind fiber, double k, int fiber_dim);

struct ConditionCheck {
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;
  double worst_location = 0.0;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;  // H1..H4
  bool all_pass() const;
  const ConditionCheck& operator[](int i) const { return checks.at(i); }
};

// Evaluates (H1)-(H4) on a uniform grid over (0, t0).
ConditionReport check_warping_conditions(const WarpedProduct& w, int grid_size);

// h(u) etc. as a D2 over whatever variables u carries.
D2 warp_d2(const WarpedProduct& w, const D2& u);

}  // namespace curvlab::ambient
