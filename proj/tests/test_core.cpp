#include "optikit/core.hpp"
#include "optikit/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace optikit;

TEST_SUITE("core") {
  TEST_CASE("oracle library values and gradients") {
    Mat A(2, 2);
    A << 2, 0.5, 0.5, 1;
    Vec b(2);
    b << 1, -1;
    FirstOrderOracle q = quadratic_oracle(A, b);
    Vec x(2);
    x << 0.3, -0.7;
    Eval e = q(x);
    CHECK(e.f == doctest::Approx(0.5 * x.dot(A * x) - b.dot(x)));
    CHECK((e.g - (A * x - b)).norm() < 1e-15);
    REQUIRE(q.opt);
    CHECK((A * q.opt->x - b).norm() < 1e-12);

    FirstOrderOracle dist = distance_oracle(b);
    CHECK(dist.value(b) == 0.0);
    CHECK(dist.value(x) == doctest::Approx((x - b).norm()));
    CHECK(dist(x).g.norm() == doctest::Approx(1.0));

    FirstOrderOracle l1 = l1norm_oracle(2);
    CHECK(l1.value(x) == doctest::Approx(1.0));

    FirstOrderOracle lse = logsumexp_oracle(2);
    CHECK(lse.value(Vec::Zero(2)) == doctest::Approx(std::log(2.0)));
    CHECK(lse(x).g.sum() == doctest::Approx(1.0));
  }

  TEST_CASE("oracle rejects wrong dimension and non-finite input") {
    FirstOrderOracle f = linear_oracle(Vec::Ones(3));
    CHECK_THROWS_AS(f(Vec::Zero(2)), InputError);
    Vec bad = Vec::Zero(3);
    bad[1] = std::nan("");
    CHECK_THROWS(f(bad));
  }

  TEST_CASE("perturbed oracle respects the error budget") {
    FirstOrderOracle f = quadratic_oracle(Mat::Identity(3, 3), Vec::Zero(3));
    NoiseRule rule;
    rule.offset = Vec::Ones(3);
    FirstOrderOracle g = perturb_oracle(f, 0.1, 0.0, rule);
    Vec x = Vec::LinSpaced(3, -1, 1);
    CHECK((g(x).g - f(x).g).norm() == doctest::Approx(0.1));
    CHECK(g.value(x) == f.value(x));

    NoiseRule rnd;
    rnd.kind = NoiseRule::Kind::RandomDirection;
    rnd.seed = 5;
    FirstOrderOracle h1 = perturb_oracle(f, 0.2, 0.05, rnd), h2 = perturb_oracle(f, 0.2, 0.05, rnd);
    CHECK((h1(x).g - f(x).g).norm() <= 0.2 + 1e-15);
    CHECK(std::abs(h1.value(x) - f.value(x)) <= 0.05 + 1e-15);
    CHECK((h1(x).g - h2(x).g).norm() == 0.0);

    FirstOrderOracle same = perturb_oracle(f, 0.0, 0.0, rule);
    CHECK((same(x).g - f(x).g).norm() == 0.0);
  }

  TEST_CASE("gradient model satisfies the model inequality") {
    FirstOrderOracle f = quadratic_oracle(Vec::LinSpaced(4, 0.5, 2.0).asDiagonal().toDenseMatrix(), Vec::Ones(4));
    ModelOracle m = gradient_model(f);
    EuclideanGeometry geo;
    Vec x = Vec::LinSpaced(4, -1, 1), y = Vec::LinSpaced(4, 2, 0);
    CHECK(check_model(m, x, y, geo, 0.0, 2.0));
    CHECK_FALSE(check_model(m, x, y, geo, 0.0, 0.1));
  }

  TEST_CASE("trace CSV format and finalize") {
    Trace t;
    t.record({0, 1.5, 0.25, 0.0, 1.0, 1, 7});
    t.record({1, 1.0, 1e-9, 0.0, 1.0, 2, 9});
    const std::string csv = trace_csv(t, false);
    CHECK(csv.rfind(trace_header() + "\n", 0) == 0);
    CHECK(csv.find("1,1,1.0000000000000001e-09,0,1,2,0") != std::string::npos);

    Report r = finalize(t, Vec::Zero(1), 1e-6);
    CHECK(r.status == Status::Converged);
    CHECK(r.iterations == 1);
    Report r2 = finalize(t, Vec::Zero(1), 1e-12);
    CHECK(r2.status == Status::IterBudget);
    CHECK(std::string(status_name(Status::Infeasible)).size() > 0);
  }
}
