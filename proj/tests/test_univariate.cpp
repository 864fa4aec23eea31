#include "optikit/univariate.hpp"

#include <doctest.h>

#include <cmath>

using namespace optikit;

TEST_SUITE("univariate") {
  TEST_CASE("bisection respects its call bound") {
    const double xs = 3.7;
    SignOracle s = [&](double x) { return x < xs ? -1 : (x > xs ? 1 : 0); };
    for (double x0 : {0.0, 10.0, 3.0}) {
      Bracket b = bisect(s, x0, 0.5, 1e-8);
      CHECK(b.contains(xs));
      CHECK(b.length() <= 1e-8);
      CHECK(b.calls <= bisect_call_bound(x0, xs, 0.5, 1e-8));
    }
  }

  TEST_CASE("golden section shrinks by the golden ratio") {
    ValueOracle f = [](double x) { return (x - 1.25) * (x - 1.25) + 2.0; };
    Bracket b = golden_on_interval(f, -3.0, 4.0, 1e-9);
    CHECK(std::abs(b.best - 1.25) <= 1e-8);
    REQUIRE(b.lengths.size() > 2);
    // exact ratio until round-off in the interior point is comparable to the length
    for (std::size_t k = 1; k < b.lengths.size(); ++k) {
      if (b.lengths[k] < 1e-4) break;
      CHECK(b.lengths[k] / b.lengths[k - 1] == doctest::Approx(kGolden).epsilon(1e-9));
    }
    for (std::size_t k = 1; k < b.lengths.size(); ++k)
      CHECK(b.lengths[k] / b.lengths[k - 1] == doctest::Approx(kGolden).epsilon(1e-5));
    Bracket g = golden_section(f, 10.0, 1.0, 1e-7);
    CHECK(std::abs(g.best - 1.25) <= 1e-6);
  }

  TEST_CASE("scalar root finders") {
    ValueOracle f = [](double t) { return std::exp(t) - 3.0; };
    ValueOracle df = [](double t) { return std::exp(t); };
    CHECK(newton_scalar(f, df, 0.0, 1e-14) == doctest::Approx(std::log(3.0)));
    CHECK(bisect_root(f, -5.0, 5.0, 1e-13) == doctest::Approx(std::log(3.0)));
  }
}
