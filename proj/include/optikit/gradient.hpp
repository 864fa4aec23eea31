#pragma once

#include "optikit/core.hpp"
#include "optikit/geometry.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace optikit {

// f(x) = 1/2 <x, Ax> - <b, x> with mu I <= A <= L I
struct QuadraticProblem {
  Mat A;
  Vec b;
  double mu = 0.0, L = 0.0;

  static QuadraticProblem make(Mat A, Vec b);  // spectral bounds from eigenvalues
  double value(const Vec& x) const { return 0.5 * x.dot(A * x) - b.dot(x); }
  Vec grad(const Vec& x) const { return A * x - b; }
  Vec solution() const;
  FirstOrderOracle oracle() const;
};

// Optional per-iterate record for rate tests.
using IterateLog = std::vector<Vec>;

// x_{k+1} = argmin <g, x - x_k> + L/2 |x - x_k|^2 over the geometry's set; every step also
// audits f(x_{k+1}) <= f(x_k) + <g, x_{k+1}-x_k> + L/2 |x_{k+1}-x_k|^2.
Report gd_fixed(const FirstOrderOracle& f, double L, const Vec& x0, long N,
                const Geometry* geo = nullptr, IterateLog* log = nullptr);
double gd_bound(double L, double R, long N);  // L R^2 / (4N)

Report chebyshev(const QuadraticProblem& q, const Vec& x0, long N, IterateLog* log = nullptr);
double chebyshev_factor(double mu, double L, long N);  // 2 / (xi^N + xi^-N)
Report heavy_ball(const QuadraticProblem& q, const Vec& x0, long N, IterateLog* log = nullptr);
Report conjugate_gradient(const QuadraticProblem& q, const Vec& x0, long N, double tol = 0.0,
                          IterateLog* log = nullptr);
double cg_bound(double mu, double L, double R, long N);

// --- (delta, L)-model methods ----------------------------------------------------

struct ModelOptions {
  double L0 = 1.0;
  long N = 100;
  double delta = 0.0;        // model error in the acceptance test
  double delta_tilde = 0.0;  // subproblem inexactness (enters the bounds only)
  bool adaptive = true;      // false: L_k = L0 throughout, no acceptance test
  double L_max_factor = 1e6;
  std::optional<double> R2;  // V(x*, x0), for the certified gap
  double eps = 0.0;          // > 0: stop once the certified gap is <= eps
};

struct ModelLog {
  std::vector<double> L;  // accepted L_{k+1}
  std::vector<double> A, alpha, delta;
  std::vector<Vec> x, y, u;  // x_0.., y_1.., u_0..
  long tests = 0;            // acceptance-test evaluations
};

// Non-accelerated method; output is the average of x_1..x_N.
Report adaptive_model_gd(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                         const ModelOptions& opt, ModelLog* log = nullptr);

// Accelerated similar-triangles method; output is x_N.
Report adaptive_accelerated(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                            const ModelOptions& opt, ModelLog* log = nullptr);

// Accelerated method with delta_{k+1} = eps alpha_{k+1} / (4 A_{k+1}) (running min) and an
// exact gradient model. Stops when R^2 / A_N <= eps / 2; gap <= eps then.
struct UniversalOptions {
  double eps = 1e-3;
  double L0 = 1.0;
  double R = 1.0;     // upper bound on sqrt(V(x*, x0))
  long max_iter = 1000000;
};
Report universal_solve(const FirstOrderOracle& f, const Geometry& geo, const Vec& x0,
                       const UniversalOptions& opt, ModelLog* log = nullptr);
// Iteration count of universal_solve for a fixed Hoelder pair (nu, Lnu); the method itself
// attains the minimum of this over nu without knowing it.
double universal_count(double nu, double Lnu, double R, double eps);

struct RestartOptions {
  double mu = 0.0;
  double L = 0.0;          // smoothness of the model in geo's norm
  double eps = 1e-6;
  double R = 0.0;          // upper bound on |y0 - x*| in geo's norm
  long max_stages = 60;
  bool adaptive = false;   // inner method: fixed L (default) or adaptive from L0 = L
};
struct RestartLog {
  std::vector<double> stage_gap;   // F(x^k) - F* when the model knows F*
  std::vector<long> stage_calls;   // cumulative oracle calls
  std::vector<Vec> stage_x;
  long stage_length = 0;
};
long restart_stage_length(double L, double omega, double mu);  // ceil sqrt(16 L omega / mu)
// ceil sqrt(16 L omega / mu) * ceil log2(mu R^2 / eps)
long restart_total_count(double L, double omega, double mu, double R, double eps);
Report restart_strongly_convex(const ModelOracle& model, const Geometry& geo, const Vec& y0,
                               const RestartOptions& opt, RestartLog* log = nullptr);

// --- accelerated meta-algorithm, first order -------------------------------------

// Solves min_y <s, y> + g(y) + H/2 |y - c|^2.
using ProxSolver = std::function<Vec(const Vec& c, const Vec& s, double H)>;

struct MetaOptions {
  double H = 1.0;
  long K = 50;
  double Lg = 0.0;           // Lipschitz constant of grad g, for the inner test
  long inner_budget = 10000; // gradient steps per inner solve
};
struct MetaLog {
  std::vector<long> inner_steps;
  std::vector<double> lambda;
  std::vector<Vec> y;
  long g_calls = 0;          // gradient evaluations of g, inner and outer
};
// f may have dim 0 (f = 0). Without an exact solver, the inner problem is solved by
// gradient steps until the inexactness test guarantees the required accuracy.
Report accelerated_meta_p1(const FirstOrderOracle& f, const FirstOrderOracle& g, const Vec& x0,
                           const MetaOptions& opt, const ProxSolver& exact = nullptr,
                           MetaLog* log = nullptr);
double meta_bound(double H, double R, long k);  // 4 H R^2 / k^2

}  // namespace optikit
