#include <cmath>
#include <random>

#include "curvlab/ambient.hpp"
#include "doctest.h"

using namespace curvlab;
using namespace curvlab::ambient;
using Eigen::VectorXd;

TEST_CASE("comparison functions satisfy s' = c and c'' + delta c = 0") {
  const double h = 1e-5;
  for (double delta : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
    for (double t : {0.1, 0.5, 1.0, 1.8}) {
      if (delta > 0.0 && t >= M_PI / std::sqrt(delta) - 2.0 * h) continue;
      const double sp = (sdelta(delta, t + h) - sdelta(delta, t - h)) / (2.0 * h);
      CHECK(sp == doctest::Approx(cdelta(delta, t)).epsilon(1e-8));
      const double cpp =
          (cdelta(delta, t + h) - 2.0 * cdelta(delta, t) + cdelta(delta, t - h)) / (h * h);
      CHECK(cpp + delta * cdelta(delta, t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-5));
      // first integral c^2 + delta s^2 = 1
      const double c = cdelta(delta, t), s = sdelta(delta, t);
      CHECK(c * c + delta * s * s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS(cdelta(1.0, 4.0));
  CHECK_THROWS(sdelta(0.0, -0.1));
}

TEST_CASE("model radius and geodesic radius are inverse") {
  for (double delta : {-1.0, -0.25, 0.0, 0.5}) {
    for (double rho : {0.05, 0.4, 1.1}) {
      const double s = model_radius(delta, rho);
      CHECK(geodesic_radius(delta, s) == doctest::Approx(rho).epsilon(1e-12));
    }
  }
}

TEST_CASE("conformal factor in the hyperbolic ball") {
  VectorXd origin = VectorXd::Zero(3);
  CHECK(conformal_factor(-1.0, origin) == doctest::Approx(std::log(2.0)));
  CHECK(conformal_factor(0.0, origin) == 0.0);

  // gradient against finite differences
  VectorXd x(3);
  x << 0.2, -0.1, 0.3;
  for (double delta : {-1.0, 0.5}) {
    const VectorXd g = conformal_factor_gradient(delta, x);
    for (int i = 0; i < 3; ++i) {
      VectorXd xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const double fd = (conformal_factor(delta, xp) - conformal_factor(delta, xm)) / 2e-6;
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("hyperbolic distance along a diameter matches the conformal line integral") {
  SpaceForm hyp{3, -1.0};
  VectorXd p(3), q(3);
  p << -0.4, 0.0, 0.0;
  q << 0.4, 0.0, 0.0;
  // int_{-0.4}^{0.4} 2/(1-r^2) dr = 2 (atanh(0.4) - atanh(-0.4)) / ... quadrature oracle
  const int N = 20000;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    const double r = -0.4 + 0.8 * (i + 0.5) / N;
    acc += 0.8 / N * 2.0 / (1.0 - r * r);
  }
  CHECK(geodesic_distance(hyp, p, q) == doctest::Approx(acc).epsilon(1e-7));
  CHECK(geodesic_distance(hyp, p, q) == doctest::Approx(4.0 * std::atanh(0.4)).epsilon(1e-12));
}

TEST_CASE("exp and log maps round-trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (double delta : {-1.0, 0.0, 0.5}) {
    SpaceForm sf{3, delta};
    for (int rep = 0; rep < 30; ++rep) {
      VectorXd p(3), q(3);
      for (int i = 0; i < 3; ++i) {
        p[i] = dist(rng);
        q[i] = dist(rng);
      }
      const VectorXd v = log_map(sf, p, q);
      const VectorXd back = exp_map(sf, p, v);
      CHECK((back - q).norm() < 1e-9);
      CHECK(geodesic_distance(sf, p, q) ==
            doctest::Approx(geodesic_distance(sf, q, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distance agrees with the log map length") {
  SpaceForm sph{3, 0.5};
  VectorXd p(3), q(3);
  p << 0.1, 0.2, -0.1;
  q << -0.2, 0.15, 0.3;
  const VectorXd v = log_map(sph, p, q);
  CHECK(v.norm() == doctest::Approx(geodesic_distance(sph, p, q)).epsilon(1e-10));
}

TEST_CASE("cosh warping passes the structural conditions") {
  const auto w = make_cosh_warped(2.0, 2, 1.0);
  const auto rep = check_warping_conditions(w, 64);
  CHECK(rep.all_pass());
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
}

TEST_CASE("warping functions violating the axis condition are flagged") {
  WarpedProduct lin;
  lin.t0 = 2.0;
  lin.h = [](double t) { return 1.0 + t; };
  lin.h_prime = [](double) { return 1.0; };
  lin.h_second = [](double) { return 0.0; };
  lin.fiber_dim = 2;
  lin.k = 1.0;
  const auto rep = check_warping_conditions(lin, 64);
  CHECK_FALSE(rep[0].pass);  // h'(0) != 0

  WarpedProduct sh;
  sh.t0 = 2.0;
  sh.h = [](double t) { return std::sinh(t) + 1.0; };
  sh.h_prime = [](double t) { return std::cosh(t); };
  sh.h_second = [](double t) { return std::sinh(t); };
  sh.fiber_dim = 2;
  sh.k = 1.0;
  CHECK_FALSE(check_warping_conditions(sh, 64)[0].pass);
}

TEST_CASE("tabulated warping reproduces its source function") {
  std::vector<double> t, h;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(2.0 * i / 200);
    h.push_back(std::cosh(t.back()));
  }
  const auto w = make_tabulated_warped(t, h, FiberKind::RoundSphere, 1.0, 2);
  for (double s : {0.13, 0.77, 1.5, 1.93}) {
    CHECK(w.h(s) == doctest::Approx(std::cosh(s)).epsilon(1e-7));
    CHECK(w.h_prime(s) == doctest::Approx(std::sinh(s)).epsilon(1e-5));
  }
  CHECK(check_warping_conditions(w, 48).all_pass());
}

TEST_CASE("polynomial warping obeys its coefficients") {
  const auto w = make_polynomial_warped(1.5, 1.0, 0.5, 0.1, 2, 1.0);
  const double t = 0.8;
  CHECK(w.h(t) == doctest::Approx(1.0 + 0.5 * t * t + 0.1 * t * t * t * t));
  CHECK(w.h_prime(t) == doctest::Approx(t + 0.4 * t * t * t));
  CHECK(w.h_prime(0.0) == 0.0);
}

TEST_CASE("warp evaluation propagates derivatives") {
  const auto w = make_cosh_warped(3.0, 2, 1.0);
  D2 u = D2::variable(0.7, 1, 0);
  const D2 hu = warp_d2(w, u);
  CHECK(hu.v == doctest::Approx(std::cosh(0.7)));
  CHECK(hu.g[0] == doctest::Approx(std::sinh(0.7)));
  CHECK(hu.h(0, 0) == doctest::Approx(std::cosh(0.7)));
}
