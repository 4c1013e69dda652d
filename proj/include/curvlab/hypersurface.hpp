#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "curvlab/ambient.hpp"
#include "curvlab/dual.hpp"
#include "curvlab/symfun.hpp"

namespace curvlab::hypersurface {

double sphere_volume(int n);  // Vol(S^n)

// Product quadrature grid on S^n (Gauss-Legendre in the polar angles, exact
// trapezoid in the periodic one) or on the flat torus T^n.
struct ParamGrid {
  int n = 2;
  int degree = 0;
  bool torus = false;
  Eigen::MatrixXd angles;   // N x n
  Eigen::MatrixXd nodes;    // N x (n+1) unit vectors (sphere grids only)
  Eigen::VectorXd weights;  // round measure on the unit S^n / coordinate measure on T^n
  int size() const { return static_cast<int>(weights.size()); }
};

ParamGrid build_grid(int n, int degree);
ParamGrid build_torus_grid(int n, int degree);

// Smooth scalar function of a direction vector (or of torus angles), with
// analytic gradient and Hessian.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual D2 eval(const Eigen::VectorXd& x) const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

// a single monomial term: coefficient * prod_i x_i^{powers[i]}
struct MonomialTerm {
  double coeff = 0.0;
  std::vector<int> powers;
};

FieldPtr constant_field(double c);
// Euclidean radius of the ellipsoid with the given semi-axes, as a
// 0-homogeneous function of the direction.
FieldPtr ellipsoid_radius(const Eigen::VectorXd& semi_axes);
// rho * (1 + amplitude * P(x)) with P a polynomial in the direction components
FieldPtr perturbed_sphere_radius(double rho, double amplitude, const std::vector<MonomialTerm>& poly);
FieldPtr polynomial_field(const std::vector<MonomialTerm>& poly);
// radial graph of the sphere |y - center| = radius, star-shaped about the origin
FieldPtr offset_sphere_radius(double radius, const Eigen::VectorXd& center);

// Star-shaped closed hypersurface: geodesic-radius graph over S^n in a space
// form, or height graph over the fiber in a warped product.
struct RadialGraph {
  std::optional<ambient::SpaceForm> space_form;
  std::optional<ambient::WarpedProduct> warped;
  FieldPtr radius;  // geodesic radius u(x) (space form) / fiber height u(y) (warped)
  int n = 2;

  bool is_space_form() const { return space_form.has_value(); }
};

RadialGraph make_space_form_surface(const ambient::SpaceForm& sf, FieldPtr radius);
RadialGraph make_warped_surface(const ambient::WarpedProduct& w, FieldPtr height);

// Pointwise extrinsic state at one quadrature node.
struct PointFrame {
  Eigen::MatrixXd metric;       // induced metric in parameter coordinates
  Eigen::MatrixXd second_form;  // w.r.t. the outward normal
  Eigen::VectorXd normal;       // ambient components (model coords / (t, fiber) coords)
  symfun::CurvatureVector kappa;
  double support = 0.0;      // <Z,nu> (space form) or <X,nu> (warped)
  double conformal_f = 0.0;  // c_delta(rho) or h'(u)
  double rho = 0.0;          // geodesic distance to the base point / t-coordinate
  Eigen::VectorXd position;  // model coordinates (space form) or (u, fiber angles)
  double measure_ratio = 0.0;  // sqrt(det g) relative to the grid reference density

  // flat-model quantities (space forms; used by the conformal Sobolev step
  // and the anisotropic machinery at delta = 0)
  Eigen::MatrixXd jac;           // tangent basis d(model point)/d(angles), (n+1) x n
  Eigen::MatrixXd euclid_metric;
  Eigen::MatrixXd euclid_second;
  Eigen::VectorXd euclid_normal;
  double euclid_H = 0.0;
  double euclid_ratio = 0.0;
};

struct GeometricSummary {
  double area = 0.0;
  double enclosed_volume = 0.0;
  double weighted_enclosed = 0.0;  // integral of f over the enclosed domain
  double extrinsic_radius = 0.0;
  Eigen::VectorXd center;  // model coordinates (space forms only)
  double b_sup_norm = 0.0;        // sup of the spectral norm of the shape operator
  double b_sup_frobenius = 0.0;   // sup of the Frobenius norm (used by the constant chain)
  bool center_valid = false;
};

struct SphereFit {
  Eigen::VectorXd center;
  double rho0 = 0.0;
  double residual = 0.0;
  bool converged = true;
};

// Precomputed geometry of one surface over one grid.
class SurfaceGeometry {
 public:
  SurfaceGeometry(RadialGraph surface, ParamGrid grid);

  const RadialGraph& surface() const { return surface_; }
  const ParamGrid& grid() const { return grid_; }
  const std::vector<PointFrame>& frames() const { return frames_; }
  const PointFrame& frame_at(int node) const { return frames_.at(node); }
  int size() const { return static_cast<int>(frames_.size()); }
  int n() const { return surface_.n; }

  // surface integral of a per-node field
  double integrate(const std::function<double(int, const PointFrame&)>& field) const;
  double integrate_values(const Eigen::VectorXd& values) const;
  // same, against the flat-model measure (space forms)
  double integrate_flat(const std::function<double(int, const PointFrame&)>& field) const;

  double area() const;
  // integral over the enclosed domain of a radial-profile weight w(t), where t
  // is the geodesic distance to the base point (space form) or the t-coordinate
  // (warped product)
  double enclosed_weighted_volume(const std::function<double(double)>& weight) const;
  double starshape_margin() const;

  GeometricSummary summary() const;
  SphereFit best_fit_geodesic_sphere() const;
  double hausdorff_to_sphere(const Eigen::VectorXd& center, double rho0) const;

  Eigen::VectorXd karcher_mean() const;  // space forms only

 private:
  RadialGraph surface_;
  ParamGrid grid_;
  std::vector<PointFrame> frames_;
  mutable std::optional<GeometricSummary> summary_cache_;

  void build_space_form_frames();
  void build_warped_frames();
};

}  // namespace curvlab::hypersurface
