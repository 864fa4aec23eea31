#pragma once

#include "optikit/core.hpp"
#include "optikit/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace optikit {

enum class StepPolicy {
  FixedR,       // h = R/(M sqrt N), uniform average
  FixedEps,     // h = eps/M^2, uniform average
  AdaptiveEps,  // h_k = eps/|g_k|^2, h-weighted average
  AdaptiveR     // h_k = R/(|g_k| sqrt N), best iterate
};

StepPolicy parse_policy(const std::string& s);

struct SubgradientOptions {
  StepPolicy policy = StepPolicy::FixedR;
  double R = 1.0;  // |x0 - x*|_2, or an upper bound
  double M = 1.0;
  double eps = 0.1;
  long N = 0;  // 0: M^2 R^2 / eps^2
  FeasibleSet Q = FeasibleSet::whole();
};

struct SubgradientLog {
  std::vector<Vec> x;  // x_0 .. x_N
  std::vector<Vec> g;
  std::vector<double> h;
  std::vector<double> weight;  // averaging weights of the output, sum 1; empty for AdaptiveR
};

// Report.gap is the computable bound (R^2 + sum h_k^2 |g_k|^2) / (2 sum h_k) for the
// averaged outputs and R^2 / sum h_k for the best-iterate policy.
Report subgradient_descent(const FirstOrderOracle& f, const Vec& x0, const SubgradientOptions& opt,
                           SubgradientLog* log = nullptr);

// --- switching subgradient method -------------------------------------------------

struct ConstraintValue {
  double value = 0.0;  // g(x) = max_l g_l(x)
  int index = 0;       // attaining l, lowest on ties
  Vec grad;            // subgradient of g_index at x
};
using ConstraintOracle = std::function<ConstraintValue(const Vec&)>;

// Max of a finite family of convex constraints, ties broken by lowest index.
ConstraintOracle max_constraint(std::vector<FirstOrderOracle> gl);

struct SwitchingOptions {
  double Mf = 1.0, Mg = 1.0, eps = 0.1;
  FeasibleSet Q = FeasibleSet::whole();
  int m = 1;            // number of constraints g_l
  double R0 = 0.0;      // |x0 - x*|: first count
  double Rbar = 0.0;    // |x - y|^2 <= 2 Rbar^2 on Q: second count and the gap bound
  long N = 0;           // 0: derived from R0 or Rbar
  bool stop_on_certificate = false;  // stop once the algebraic gap bound is <= eps
  // phi(lambda) = min_{x in Q} f(x) + sum lambda_l g_l(x), when analytic
  std::function<double(const Vec&)> dual;
};

long switching_iterations_first(double Mf, double Mg, double R0, double eps);
long switching_iterations_second(double Mf, double Mg, double Rbar, double eps);

struct SwitchingResult {
  Vec x_hat;
  Vec lambda;
  double g_hat = 0.0;            // g(x_hat)
  double f_hat = 0.0;
  double gap = 0.0;              // f(x_hat) - phi(lambda) when dual is given, else NaN
  double gap_bound = 0.0;        // algebraic bound (needs Rbar), else NaN
  long productive = 0, nonproductive = 0;
  std::vector<double> weights;   // averaging weights over productive steps
  Report report;
};

SwitchingResult switching_subgradient(const FirstOrderOracle& f, const ConstraintOracle& g,
                                      const Vec& x0, const SwitchingOptions& opt);

}  // namespace optikit
