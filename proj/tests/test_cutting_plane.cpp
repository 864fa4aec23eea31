#include "optikit/cutting_plane.hpp"

#include <doctest.h>

#include <cmath>

using namespace optikit;

TEST_SUITE("cutting_plane") {
  TEST_CASE("central cut keeps the half ellipsoid and shrinks the volume") {
    EllipsoidState e{Vec::Zero(3), Mat::Identity(3, 3) * 4.0};
    Vec g(3);
    g << 1, -2, 0.5;
    EllipsoidState n = ellipsoid_update(e, g);
    CHECK(std::exp(log_det(n.H) - log_det(e.H)) == doctest::Approx(det_ratio(3)));
    // points of the kept half on the old boundary stay inside the new ellipsoid
    Mat Hi = n.H.inverse();
    for (int i = 0; i < 3; ++i) {
      for (double s : {-2.0, 2.0}) {
        Vec x = Vec::Unit(3, i) * s;
        if (g.dot(x) > 0) continue;
        CHECK((x - n.c).dot(Hi * (x - n.c)) <= 1.0 + 1e-12);
      }
    }
  }

  TEST_CASE("one-dimensional update halves the interval") {
    EllipsoidState e{Vec::Constant(1, 0.0), Mat::Constant(1, 1, 1.0)};
    EllipsoidState n = ellipsoid_update(e, Vec::Constant(1, 1.0));
    CHECK(n.c[0] == doctest::Approx(-0.5));
    CHECK(n.H(0, 0) == doctest::Approx(0.25));
  }

  TEST_CASE("constrained minimization with a certified gap") {
    Vec c(2);
    c << 2.0, 0.0;
    FirstOrderOracle f = distance_oracle(c);
    SeparationOracle ball = [](const Vec& x) -> std::optional<Vec> {
      if (x.norm() <= 1.0) return std::nullopt;
      return Vec(x);
    };
    EllipsoidOptions o;
    o.R = 2.0;
    o.eps = 1e-6;
    o.max_iter = ellipsoid_iteration_bound(2, 1.0, 2.0, 1e-8);
    Report r = ellipsoid_minimize(f, ball, Vec::Zero(2), o);
    CHECK(r.status == Status::Converged);
    CHECK(r.fval - 1.0 <= 1e-6);
    CHECK(r.gap <= 1e-6);
    CHECK(r.x.norm() <= 1.0 + 1e-12);
  }

  TEST_CASE("LP pipeline: exact vertex on a small instance") {
    LPInstance lp;
    lp.A.resize(4, 2);
    lp.A << 1, 1, -1, 0, 0, -1, 1, 2;
    lp.b.resize(4);
    lp.b << 4, 0, 0, 8;
    lp.c.resize(2);
    lp.c << 1, 2;
    LPResult r = lp_solve(lp, 1e-6);
    REQUIRE(r.status == Status::Converged);
    CHECK(r.value == doctest::Approx(8.0));
    REQUIRE(r.recovery);
    CHECK(((lp.A * r.x - lp.b).array() <= 0).all());
  }

  TEST_CASE("Klee-Minty cubes are solved exactly") {
    for (int n : {2, 4}) {
      LPInstance km = klee_minty(n);
      LPResult r = lp_solve(km, 1e-6);
      REQUIRE(r.status == Status::Converged);
      CHECK(r.value == doctest::Approx(std::pow(5.0, n)));
      CHECK(((km.A * r.x - km.b).array() <= 0).all());
    }
  }

  TEST_CASE("infeasible system is detected") {
    LPInstance lp;
    lp.A.resize(2, 1);
    lp.A << 1, -1;
    lp.b.resize(2);
    lp.b << -1, -1;  // x <= -1 and x >= 1
    FeasibilityResult f = lp_feasibility(lp, 1e-3);
    CHECK_FALSE(f.feasible);
  }

  TEST_CASE("Hadamard bound dominates every square subdeterminant") {
    Mat A(3, 3);
    A << 2, -1, 0, 1, 3, 1, 0, 1, 4;
    CHECK(std::abs(A.determinant()) <= hadamard_delta(A) + 1e-12);
    CHECK(recovery_eps0(A) == doctest::Approx(1.0 / (5.0 * hadamard_delta(A))));
  }
}
