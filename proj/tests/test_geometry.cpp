#include "optikit/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace optikit;

TEST_SUITE("geometry") {
  TEST_CASE("euclidean projections") {
    Vec y(3);
    y << 0.9, 0.4, -0.3;
    Vec p = project_simplex(y);
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK((p.array() >= 0).all());
    // optimality: y - p is constant on the support
    CHECK(p[2] == 0.0);
    CHECK((y[0] - p[0]) == doctest::Approx(y[1] - p[1]));

    Vec q = project_l1ball(y, 1.0);
    CHECK(q.lpNorm<1>() == doctest::Approx(1.0));
    Vec small = 0.1 * y;
    CHECK((project_l1ball(small, 1.0) - small).norm() == 0.0);

    FeasibleSet box = FeasibleSet::box(Vec::Zero(3), Vec::Constant(3, 0.5));
    Vec b = project_euclidean(box, y);
    CHECK(b[0] == 0.5);
    CHECK(b[2] == 0.0);
    FeasibleSet ball = FeasibleSet::ball(0.5);
    CHECK(project_euclidean(ball, y).norm() == doctest::Approx(0.5));
    CHECK(ball.contains(project_euclidean(ball, y)));
  }

  TEST_CASE("entropy geometry: KL divergence and exponentiated step") {
    EntropyGeometry g(3);
    Vec x = g.start_point(3);
    CHECK(x.sum() == doctest::Approx(1.0));
    Vec y(3);
    y << 0.5, 0.3, 0.2;
    double kl = 0.0;
    for (int i = 0; i < 3; ++i) kl += y[i] * std::log(y[i] / x[i]);
    CHECK(g.bregman(y, x) == doctest::Approx(kl));
    Vec gr(3);
    gr << 1, 0, -1;
    Vec z = g.mirror_step(x, gr, 0.5);
    CHECK(z.sum() == doctest::Approx(1.0));
    CHECK(z[2] / z[0] == doctest::Approx(std::exp(1.0)));
    CHECK(std::isinf(g.omega()));
    CHECK_THROWS(g.recenter(y));
  }

  TEST_CASE("a-norm geometry") {
    const int n = 8;
    ANormGeometry g(n);
    CHECK(g.a() == doctest::Approx(anorm_exponent(n)));
    CHECK(g.a() == doctest::Approx(2 * std::log(n) / (2 * std::log(n) - 1)));
    Vec x = g.start_point(n);
    CHECK(g.set().contains(x, 1e-12));
    Vec c = Vec::LinSpaced(n, -1, 1);
    Vec s = g.solve_linear(c);
    CHECK(s.sum() == doctest::Approx(1.0));
    CHECK((s.array() >= -1e-15).all());
    // s minimizes <c, .> + d over the simplex: no vertex direction improves it
    const double base = c.dot(s) + g.d(s);
    for (int j = 0; j < n; ++j) {
      Vec t = 0.99 * s + 0.01 * Vec::Unit(n, j);
      CHECK(c.dot(t) + g.d(t) >= base - 1e-12);
    }
    CHECK(std::isfinite(g.omega()));
    auto r = g.recenter(x);
    CHECK(r->name() == "anorm");
  }

  TEST_CASE("geometry factory") {
    CHECK(make_geometry("euclid", 3, FeasibleSet::whole())->name() == "euclid");
    CHECK(make_geometry("entropy", 3, FeasibleSet::simplex())->name() == "entropy");
    CHECK_THROWS(make_geometry("nope", 3, FeasibleSet::whole()));
  }
}
