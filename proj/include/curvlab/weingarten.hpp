#pragma once

#include <functional>
#include <vector>

#include "curvlab/hypersurface.hpp"
#include "curvlab/identities.hpp"

namespace curvlab::weingarten {

// Target curvature relation H_r = a H + b.
struct WeingartenSpec {
  int r = 2;
  double a = 0.0;
  double b = 1.0;

  void validate(int n) const;
};

// epsilon_i = H_r(kappa_i) - a H(kappa_i) - b at every node
Eigen::VectorXd defect_field(const hypersurface::SurfaceGeometry& geom, const WeingartenSpec& spec);

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // normalized L2 of the remaining defect
  bool clipped = false;   // the sign constraints a >= 0, b > 0 were active
};

// Area-weighted least squares of H_r against (H, 1), constrained to a >= 0 and
// b > 0; minimal-norm solution on rank deficiency.
FitResult fit_coefficients(const hypersurface::SurfaceGeometry& geom, int r);

// All quantities entering the almost-Weingarten stability estimate, plus the
// two inequality sides it certifies. Norms are normalized by area:
// ||f||_p = ((1/V) int |f|^p)^{1/p}.
struct DefectReport {
  double eps_l1 = 0.0;
  double eps_l2 = 0.0;
  double tau_l2 = 0.0;
  double tau_np1 = 0.0;  // ||tau||_{n+1}
  double hr_min = 0.0;
  double hr_root_min = 0.0;   // min H_r^{1/r}
  double hrn1_min = 0.0;      // min of the mixed second-derivative factor
  double b_sup = 0.0;         // sup Frobenius norm of the shape operator
  double cn_used = 0.0;
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0;
  double chain_lhs = 0.0, chain_rhs = 0.0;          // weighted tau^2 estimate
  double final_lhs = 0.0, final_rhs = 0.0;          // ||tau||_{n+1}^{2(n+1)} <= K3 ||eps||_1
  bool chain_ok = false;
  int worst_node = -1;  // where hrn1 attains its minimum
};

// Space forms only (the weight c_delta(rho) must be positive on the surface).
DefectReport stability_chain(const hypersurface::SurfaceGeometry& geom, const WeingartenSpec& spec,
                             const symfun::CnEstimate& cn);

struct SweepRecord {
  double t = 0.0;
  double eps_l1 = 0.0;
  double eps_l2 = 0.0;
  double hausdorff = 0.0;
  double rho0 = 0.0;  // best-fit sphere radius
};

struct SweepResult {
  std::vector<SweepRecord> records;
  double gamma_hat = 0.0;   // fitted log-log slope over the small-t half
  double c_lsq = 0.0;       // least-squares prefactor
  double gamma_cert = 0.0;  // min(gamma_hat, 1)
  double c_cert = 0.0;      // max over records of hausdorff / eps_l1^gamma_cert
  bool monotone = true;     // hausdorff decreasing along decreasing eps_l1
};

using SurfaceFamily = std::function<hypersurface::SurfaceGeometry(double)>;

// family(t) must produce surfaces approaching a geodesic sphere as t -> 0.
// t_values must be positive and strictly decreasing.
SweepResult stability_sweep(const SurfaceFamily& family, const WeingartenSpec& spec,
                            const std::vector<double>& t_values);

struct RigidityVerdict {
  bool triggered = false;  // sup |eps| fell below the activation tolerance
  bool pass = true;
  double eps_sup = 0.0;
  double max_defect = 0.0;    // sup of the pointwise umbilicity defect
  double fit_residual = 0.0;  // best sphere (space form) / best slice (warped)
  double eta = 0.0;           // allowance eta(tol)
};

// Near-rigidity proxy: when the defect is below tol, the surface must be
// eta(tol)-close to a geodesic sphere or slice, eta(tol) = slope*tol + floor.
RigidityVerdict rigidity_probe(const hypersurface::SurfaceGeometry& geom,
                               const WeingartenSpec& spec, double tol,
                               double eta_slope = 10.0, double eta_floor = 1e-8);

}  // namespace curvlab::weingarten
