#pragma once

#include "optikit/core.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace optikit {

struct Bracket {
  double lo = 0.0, hi = 0.0;
  double best = 0.0;        // best point known inside [lo, hi]
  double fbest = 0.0;       // its value (golden section only)
  long calls = 0;           // oracle queries
  std::vector<double> lengths;  // interval length after each shrink step

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Sign oracle: < 0 when x < x*, > 0 when x > x*, 0 when x is a minimizer
// (for differentiable f this is sign f'(x)).
using SignOracle = std::function<int(double)>;
using ValueOracle = std::function<double(double)>;

Bracket bisect(const SignOracle& sign, double x0, double d0, double eps);
// Upper bound on oracle calls for bisect: 3 + (2 log(d + |x*-x0|) - log d - log eps)/log 2.
double bisect_call_bound(double x0, double xstar, double d0, double eps);

Bracket golden_section(const ValueOracle& f, double x0, double d, double eps);
// Golden section on a known bracket [lo, hi] of a unimodal function.
Bracket golden_on_interval(const ValueOracle& f, double lo, double hi, double eps);

constexpr double kGolden = 0.6180339887498948482;  // (sqrt 5 - 1)/2

// Safeguarded Newton for a strictly monotone f on (lo, hi); |f(theta)| <= tol on return.
double newton_scalar(const ValueOracle& f, const ValueOracle& fprime, double theta0, double tol,
                     double lo = -std::numeric_limits<double>::infinity(),
                     double hi = std::numeric_limits<double>::infinity(), int max_iter = 500);

// Root of a monotone function by plain bisection on [lo, hi] with a sign change.
double bisect_root(const ValueOracle& f, double lo, double hi, double xtol, int max_iter = 2000);

}  // namespace optikit
