#include "curvlab/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace curvlab::symfun {

CurvatureVector::CurvatureVector(Eigen::VectorXd v) : n(static_cast<int>(v.size())), values(std::move(v)) {
  if (n < 1) throw std::invalid_argument("CurvatureVector: empty");
  if (!values.allFinite()) throw std::invalid_argument("CurvatureVector: non-finite entry");
}

CurvatureVector::CurvatureVector(std::initializer_list<double> v)
    : CurvatureVector(Eigen::Map<const Eigen::VectorXd>(v.begin(), static_cast<long>(v.size()))) {}

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

double elementary_symmetric(const Eigen::VectorXd& x, int r) {
  const int n = static_cast<int>(x.size());
  if (r < 0 || r > n) throw std::domain_error("elementary_symmetric: r out of range");
  if (!x.allFinite()) throw std::invalid_argument("elementary_symmetric: non-finite entry");
  if (r == 0) return 1.0;
  // coefficients of prod_i (1 + t x_i) up to degree r
  std::vector<double> e(r + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const int top = std::min(i + 1, r);
    for (int j = top; j >= 1; --j) e[j] += x(i) * e[j - 1];
  }
  return e[r];
}

double normalized_hr(const CurvatureVector& kappa, int r) {
  const int n = kappa.n;
  if (r < 0 || r > n + 1) throw std::domain_error("normalized_hr: r out of range");
  if (r == 0) return 1.0;
  if (r == n + 1) return 0.0;
  return elementary_symmetric(kappa.values, r) / binomial(n, r);
}

namespace {
Eigen::VectorXd drop_indices(const Eigen::VectorXd& x, int i, int j) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd out(n - (j >= 0 ? 2 : 1));
  int k = 0;
  for (int m = 0; m < n; ++m)
    if (m != i && m != j) out(k++) = x(m);
  return out;
}
}  // namespace

double partial_hr(const CurvatureVector& kappa, int l, int i, int j) {
  const int n = kappa.n;
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw std::domain_error("partial_hr: invalid indices");
  if (l < 0 || l > n - 2) throw std::domain_error("partial_hr: l out of range");
  return elementary_symmetric(drop_indices(kappa.values, i, j), l) / binomial(n, l);
}

double partial_hr(const CurvatureVector& kappa, int l, int j) {
  const int n = kappa.n;
  if (j < 0 || j >= n) throw std::domain_error("partial_hr: invalid index");
  if (l < 0 || l > n - 1) throw std::domain_error("partial_hr: l out of range");
  return elementary_symmetric(drop_indices(kappa.values, j, -1), l) / binomial(n, l);
}

double hr_pinching_factor(const CurvatureVector& kappa, int r) {
  const int n = kappa.n;
  if (r < 2 || r > n) throw std::domain_error("hr_pinching_factor: r out of range");
  int imax = 0, imin = 0;
  for (int i = 1; i < n; ++i) {
    if (kappa.values(i) > kappa.values(imax)) imax = i;
    if (kappa.values(i) < kappa.values(imin)) imin = i;
  }
  if (imax == imin) imin = (imax + 1) % n;  // umbilical: any distinct pair
  return elementary_symmetric(drop_indices(kappa.values, imax, imin), r - 2) / binomial(n, r);
}

MaclaurinChain maclaurin_chain(const CurvatureVector& kappa, int r_max) {
  const int n = kappa.n;
  if (r_max < 1 || r_max > n) throw std::domain_error("maclaurin_chain: r_max out of range");
  std::vector<double> H(r_max + 2, 0.0);
  for (int s = 0; s <= std::min(r_max + 1, n + 1); ++s) H[s] = normalized_hr(kappa, s);
  if (H[r_max] <= 0.0)
    throw std::domain_error("maclaurin_chain: H_{r_max} = " + std::to_string(H[r_max]) + " is not positive");
  MaclaurinChain chain;
  chain.r_max = r_max;
  for (int s = 1; s <= r_max; ++s) chain.roots.push_back(std::pow(H[s], 1.0 / s));
  for (int s = 1; s <= r_max - 1; ++s) chain.gaps.push_back(H[s] * H[s] - H[s + 1] * H[s - 1]);
  const double tol = 1e-12;
  for (std::size_t i = 0; i + 1 < chain.roots.size(); ++i)
    if (chain.roots[i + 1] > chain.roots[i] * (1.0 + tol) + tol) chain.monotone = false;
  for (double g : chain.gaps)
    if (g < -tol) chain.gaps_nonnegative = false;
  return chain;
}

double umbilicity_defect(const CurvatureVector& kappa) {
  const double H = kappa.values.mean();
  return (kappa.values.array() - H).square().sum();
}

PinchingGap pinching_gap(const CurvatureVector& kappa, int r, const CnEstimate& cn) {
  const int n = kappa.n;
  if (r < 2 || r > n) throw std::domain_error("pinching_gap: r out of range");
  const double Hr = normalized_hr(kappa, r);
  if (Hr <= 0.0)
    throw std::domain_error("pinching_gap: H_r = " + std::to_string(Hr) + " is not positive");
  const double Hrm1 = normalized_hr(kappa, r - 1);
  PinchingGap out;
  out.gap = Hrm1 - std::pow(Hr, (r - 1.0) / r);
  const double factor = hr_pinching_factor(kappa, r);
  out.certified_lower_bound = cn.value() * umbilicity_defect(kappa) * factor * factor / (2.0 * Hrm1);
  return out;
}

CnEstimate estimate_cn(int n, int r, std::int64_t sample_count, std::uint64_t seed, double safety) {
  if (n < 2) throw std::domain_error("estimate_cn: n must be >= 2");
  if (r < 2 || r > n) throw std::domain_error("estimate_cn: r out of range");
  if (sample_count < 10000) throw std::domain_error("estimate_cn: sample_count must be >= 1e4");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    // fixed-width conversion keeps the stream bit-stable across platforms
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  double inf_ratio = std::numeric_limits<double>::infinity();
  std::int64_t used = 0;
  Eigen::VectorXd k(n);
  for (std::int64_t s = 0; s < sample_count; ++s) {
    for (int i = 0; i < n; ++i) k(i) = uniform(0.05, 2.0);
    CurvatureVector kappa(k);
    const double tau2 = umbilicity_defect(kappa);
    if (tau2 < 1e-14) continue;
    const double num = normalized_hr(kappa, r - 1) * normalized_hr(kappa, r - 1) -
                       normalized_hr(kappa, r) * normalized_hr(kappa, r - 2);
    const double factor = hr_pinching_factor(kappa, r);
    if (factor <= 0.0) continue;
    const double ratio = num / (tau2 * factor * factor);
    inf_ratio = std::min(inf_ratio, ratio);
    ++used;
  }
  if (used == 0) throw std::runtime_error("estimate_cn: degenerate sampling, no admissible tuple");
  CnEstimate est;
  est.raw_infimum = inf_ratio;
  est.safety = safety;
  est.n = n;
  est.r = r;
  est.sample_count = used;
  est.seed = seed;
  return est;
}

}  // namespace curvlab::symfun
