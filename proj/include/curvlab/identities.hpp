#pragma once

#include <map>
#include <string>

#include "curvlab/hypersurface.hpp"

namespace curvlab::identities {

// Signed result of one integral identity or inequality check.
struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual_or_gap = 0.0;  // lhs - rhs (identity) or the inequality gap
  double relative_scale = 1.0;
  bool is_inequality = false;
  bool verdict = false;
  int grid_degree = 0;
  double tol = 1e-6;
  std::map<std::string, double> extra;
};

// Hsiung-Minkowski residual. Space forms: int c_delta(rho) H_{r-1} dv minus
// int H_r <Z,nu> dv, any r in 1..n. Warped products: the conformal formula
// int f dv minus int H <X,nu> dv, r = 1 only.
IdentityReport minkowski_residual(const hypersurface::SurfaceGeometry& geom, int r, double tol = 1e-6);

// int H_r <X,nu> dv - int f H_{r-1} dv >= 0 on star-shaped hypersurfaces of
// warped products satisfying (H1)-(H4).
IdentityReport generalized_minkowski_gap(const hypersurface::SurfaceGeometry& geom, int r, double tol = 1e-6);

// int f/H dv - (n+1) int_Omega f >= 0 for mean-convex surfaces.
IdentityReport heintze_karcher_gap(const hypersurface::SurfaceGeometry& geom, double tol = 1e-6);

// int <X,nu> dv = (n+1) int_Omega f (divergence theorem for the conformal field)
IdentityReport divergence_identity(const hypersurface::SurfaceGeometry& geom, double tol = 1e-6);

// V(Sigma)^{(n-1)/n} / int |H~| dv~ computed through the flat model; an
// empirical lower bound for the Michael-Simon constant K(n). extra carries
// the V^{-(n+1)/n} vs ||H~||_{n+1}^{n+1} pair.
IdentityReport michael_simon_ratio(const hypersurface::SurfaceGeometry& geom, double tol = 1e-6);

// Pointwise Maclaurin chain monotonicity and Newton gap positivity over all
// nodes; the gap reported is the worst normalized margin.
IdentityReport maclaurin_check(const hypersurface::SurfaceGeometry& geom, int r_max, double tol = 1e-6);

}  // namespace curvlab::identities
