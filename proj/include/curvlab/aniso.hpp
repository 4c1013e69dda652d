#pragma once

#include <memory>
#include <string>
#include <vector>

#include "curvlab/hypersurface.hpp"
#include "curvlab/identities.hpp"
#include "curvlab/weingarten.hpp"

namespace curvlab::aniso {

// Positive convex integrand F on S^n, handled through its 1-homogeneous
// extension f(x) = |x| F(x/|x|) so that the spherical quantities become plain
// Euclidean derivatives: grad_{S^n}F + F x = grad f, and A_F = grad dF + F Id
// is the restriction of Hess f to the tangent plane.
class AnisotropyFunction {
 public:
  virtual ~AnisotropyFunction() = default;
  virtual D2 extension(const Eigen::VectorXd& x) const = 0;  // f as a D2 in x
  virtual std::string name() const = 0;
  // radial graph of the Wulff shape, when the family has one in closed form
  virtual hypersurface::FieldPtr wulff_radius() const = 0;

  double value(const Eigen::VectorXd& x) const { return extension(x).v; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return extension(x).g; }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const { return extension(x).h; }
};

using AnisoPtr = std::shared_ptr<const AnisotropyFunction>;

AnisoPtr constant_anisotropy(double c);
// F = c + v.x on S^n; requires |v| < c. Wulff shape: sphere of radius c at v.
AnisoPtr linear_anisotropy(double c, const Eigen::VectorXd& v);
// F = sqrt(sum_i a_i^2 x_i^2); Wulff shape: ellipsoid with semi-axes a_i.
AnisoPtr ellipsoidal_anisotropy(const Eigen::VectorXd& semi_axes);

// minimum tangential eigenvalue of A_F over the grid nodes
double convexity_margin(const AnisotropyFunction& F, const hypersurface::ParamGrid& grid);

// phi(x) = F(x) x + grad_{S^n} F(x); requires |x| = 1
Eigen::VectorXd wulff_map(const AnisotropyFunction& F, const Eigen::VectorXd& x);

struct AnisoFrame {
  Eigen::MatrixXd SF;  // anisotropic shape operator in parameter coordinates
  symfun::CurvatureVector kappaF;
  std::vector<double> HrF;  // H_r^F, r = 0..n+1
  double tauF_sq = 0.0;
  double F_at_nu = 0.0;
};

// surface must live in the flat space form. Throws if convexity fails at the
// normal of some node.
std::vector<AnisoFrame> aniso_frames(const hypersurface::SurfaceGeometry& geom,
                                     const AnisotropyFunction& F);

symfun::MaclaurinChain aniso_maclaurin(const AnisoFrame& frame, int r);

// residual of int F(nu) H_r^F dv = int H_{r+1}^F <X,nu> dv, r in 0..n-1
identities::IdentityReport aniso_minkowski_residual(const hypersurface::SurfaceGeometry& geom,
                                                    const AnisotropyFunction& F, int r,
                                                    double tol = 1e-6);

// gap = int F(nu)/H^F dv - (n+1) V(Omega) >= 0
identities::IdentityReport aniso_hk_gap(const hypersurface::SurfaceGeometry& geom,
                                        const AnisotropyFunction& F, double tol = 1e-6);

// Sobolev distance of the surface to the homothetically rescaled Wulff shape,
// through the radial correspondence about the shared star center. The scalar
// phi = r_M / (rho r_W) - 1 is measured in the round W^{2,2} norm on S^n
// (mean removed; the scale mode is absorbed by rho).
struct WulffDistance {
  double rho_scale = 0.0;  // (area(M)/area(W_F))^{1/n}
  double l2 = 0.0;
  double w22 = 0.0;
  Eigen::VectorXd center_offset;  // flat centroid of M (diagnostic)
};

WulffDistance wulff_distance(const hypersurface::SurfaceGeometry& geom,
                             const AnisotropyFunction& F);

struct AnisoSweepRecord {
  double t = 0.0;
  double eps_l1 = 0.0;
  double eps_l2 = 0.0;
  double w22 = 0.0;
  double rho_scale = 0.0;
  double ratio = 0.0;  // w22 / eps_l2
  double tau_probe = 0.0;  // normalized int tau_F^2 dv
};

struct AnisoSweepResult {
  std::vector<AnisoSweepRecord> records;
  double k_hat = 0.0;      // max ratio over the sweep
  double gamma_hat = 0.0;  // log-log slope of w22 against eps_l2
  bool co_vanish = true;   // both columns decrease along the sweep
};

AnisoSweepResult aniso_stability_sweep(const weingarten::SurfaceFamily& family,
                                       const AnisotropyFunction& F,
                                       const weingarten::WeingartenSpec& spec,
                                       const std::vector<double>& t_values);

}  // namespace curvlab::aniso
