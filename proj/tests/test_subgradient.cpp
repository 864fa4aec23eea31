#include "optikit/subgradient.hpp"

#include <doctest.h>

#include <cmath>

using namespace optikit;

TEST_SUITE("subgradient") {
  TEST_CASE("every step policy certifies its gap") {
    Vec c(3);
    c << 0.5, -0.2, 0.1;
    FirstOrderOracle f = distance_oracle(c);
    for (auto p : {StepPolicy::FixedR, StepPolicy::FixedEps, StepPolicy::AdaptiveEps, StepPolicy::AdaptiveR}) {
      SubgradientOptions o;
      o.policy = p;
      o.R = 1.0;
      o.M = 1.0;
      o.eps = 0.05;
      if (p == StepPolicy::AdaptiveR) o.N = 1600;
      SubgradientLog log;
      Report r = subgradient_descent(f, c + Vec::Unit(3, 1), o, &log);
      CHECK(f.value(r.x) <= r.gap + 1e-12);
      CHECK(r.gap <= 0.05 + 1e-12);
      if (p == StepPolicy::AdaptiveR) {
        CHECK(log.weight.empty());  // best iterate, no average
        continue;
      }
      double w = 0.0;
      for (double v : log.weight) w += v;
      CHECK(w == doctest::Approx(1.0));
    }
    CHECK_THROWS(parse_policy("whatever"));
    CHECK(parse_policy("adaptive-eps") == StepPolicy::AdaptiveEps);
  }

  TEST_CASE("projected steps stay in the set") {
    FirstOrderOracle f = linear_oracle(Vec::Ones(2));
    SubgradientOptions o;
    o.Q = FeasibleSet::ball(1.0);
    o.M = std::sqrt(2.0);
    o.R = 2.0;
    o.N = 50;
    SubgradientLog log;
    subgradient_descent(f, Vec::Zero(2), o, &log);
    for (const auto& x : log.x) CHECK(x.norm() <= 1.0 + 1e-12);
  }

  TEST_CASE("max constraint breaks ties by lowest index") {
    std::vector<FirstOrderOracle> gl{linear_oracle(Vec::Unit(2, 0)), linear_oracle(Vec::Unit(2, 0)),
                                     linear_oracle(Vec::Unit(2, 1))};
    ConstraintOracle g = max_constraint(gl);
    Vec x(2);
    x << 1.0, 0.5;
    ConstraintValue v = g(x);
    CHECK(v.value == 1.0);
    CHECK(v.index == 0);
  }

  TEST_CASE("switching method on a linear program over a ball") {
    Vec c(2);
    c << -1.0, 0.0;
    std::vector<FirstOrderOracle> gl{linear_oracle(Vec::Unit(2, 0))};  // x1 <= 0
    SwitchingOptions o;
    o.Mf = 1.0;
    o.Mg = 1.0;
    o.eps = 0.05;
    o.Q = FeasibleSet::ball(1.0);
    o.R0 = 1.0;
    SwitchingResult r = switching_subgradient(linear_oracle(c), max_constraint(gl), Vec::Constant(2, 0.3), o);
    CHECK(r.g_hat <= 0.05);
    CHECK(r.f_hat <= 0.05);  // f* = 0
    CHECK(r.productive + r.nonproductive == switching_iterations_first(1.0, 1.0, 1.0, 0.05));
  }
}
