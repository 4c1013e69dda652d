#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace curvlab::symfun {

// Principal curvatures at a point of an n-dimensional hypersurface.
struct CurvatureVector {
  int n = 0;
  Eigen::VectorXd values;

  CurvatureVector() = default;
  explicit CurvatureVector(Eigen::VectorXd v);
  CurvatureVector(std::initializer_list<double> v);
};

// Chain of normalized curvature roots H_s^{1/s} together with the Newton
// gaps H_s^2 - H_{s+1} H_{s-1}.
struct MaclaurinChain {
  int r_max = 0;
  std::vector<double> roots;  // H_s^{1/s}, s = 1..r_max
  std::vector<double> gaps;   // H_s^2 - H_{s+1} H_{s-1}, s = 1..r_max-1
  bool monotone = true;
  bool gaps_nonnegative = true;
};

double binomial(int n, int r);

// r-th elementary symmetric polynomial, stable product-expansion recurrence.
double elementary_symmetric(const Eigen::VectorXd& x, int r);

// H_r = S_r / C(n,r); H_0 = 1, H_{n+1} = 0.
double normalized_hr(const CurvatureVector& kappa, int r);

// Two-index partial quantity: sum of products of l curvatures omitting the
// entries at positions i and j, normalized by C(n,l). Indices are 0-based.
double partial_hr(const CurvatureVector& kappa, int l, int i, int j);

// One-index variant: products of l curvatures omitting position j, over C(n,l).
double partial_hr(const CurvatureVector& kappa, int l, int j);

// The pinching factor H_{r;n,1}: the mixed second derivative of H_r with
// respect to the largest and smallest principal curvature, i.e.
// sigma_{r-2}(remaining entries) / C(n,r). Valid for 2 <= r <= n.
double hr_pinching_factor(const CurvatureVector& kappa, int r);

MaclaurinChain maclaurin_chain(const CurvatureVector& kappa, int r_max);

// ||tau||^2 = sum_i (kappa_i - H)^2, the squared traceless defect.
double umbilicity_defect(const CurvatureVector& kappa);

struct PinchingGap {
  double gap = 0.0;                    // H_{r-1} - H_r^{(r-1)/r}
  double certified_lower_bound = 0.0;  // c_n ||tau||^2 H_{r;n,1}^2 / (2 H_{r-1})
};

// Dimensional constant for the pinching estimate. The raw value is the
// sampled infimum of the defining ratio; value() applies the safety factor
// under which the certified bound is used.
struct CnEstimate {
  double raw_infimum = 0.0;
  double safety = 0.9;
  int n = 0;
  int r = 0;
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  double value() const { return safety * raw_infimum; }
};

PinchingGap pinching_gap(const CurvatureVector& kappa, int r, const CnEstimate& cn);

// Sampled infimum of (H_{r-1}^2 - H_r H_{r-2}) / (||tau||^2 H_{r;n,1}^2)
// over random positive curvature tuples. Deterministic given the seed.
CnEstimate estimate_cn(int n, int r, std::int64_t sample_count, std::uint64_t seed,
                       double safety = 0.9);

}  // namespace curvlab::symfun
