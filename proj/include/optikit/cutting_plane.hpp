#pragma once

#include "optikit/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace optikit {

// E = {x : (x-c)^T H^{-1} (x-c) <= 1}
struct EllipsoidState {
  Vec c;
  Mat H;
};

// Minimal-volume ellipsoid containing {x in E : <g, x - c> <= 0}.
// For n = 1 this is interval halving.
EllipsoidState ellipsoid_update(const EllipsoidState& e, const Vec& g);
// det H'/det H for one central cut in dimension n
double det_ratio(int n);
double log_det(const Mat& H);

// Returns a cut normal a with Q inside {y : <a, y - x> <= 0} when x is not in Q,
// nothing when x is in Q.
using SeparationOracle = std::function<std::optional<Vec>(const Vec&)>;

// Per-iteration log of an ellipsoid run (tests).
struct EllipsoidLog {
  std::vector<double> log_det;
  std::vector<Vec> centers;
  std::vector<Mat> shapes;
};

struct EllipsoidOptions {
  double R = 1.0;        // minimizer inside B(x0, R)
  double eps = 1e-6;
  double delta = 0.0;    // subgradients are delta-subgradients
  long max_iter = 0;     // 0: use the Lipschitz count with M from the oracle
  bool stop_on_certificate = true;
};

// Lipschitz count 2 n^2 ln(MR/eps)
long ellipsoid_iteration_bound(int n, double M, double R, double eps);

// Minimizes f over {x : sep(x) is empty}. Reports the best feasible center and
// the certified gap f_best - max_j (f(c_j) - sqrt(g_j^T H_j g_j) - delta).
Report ellipsoid_minimize(const FirstOrderOracle& f, const SeparationOracle& sep, const Vec& x0,
                          const EllipsoidOptions& opt, EllipsoidLog* log = nullptr);

// --- linear programming --------------------------------------------------------

// max <c, x> s.t. Ax <= b
struct LPInstance {
  Mat A;
  Vec b;
  Vec c;           // empty for pure feasibility
  double R = 0.0;  // 0: derive from the data
  std::optional<Vec> x_opt;  // known optimal point, if any
  std::optional<double> value;
};

double lp_h(const LPInstance& lp);  // max |a_ij|, |b_i|, |c_j|
// Hadamard upper bound on the largest square subdeterminant of A
double hadamard_delta(const Mat& A);
// Radius that contains an optimal solution: h n^{3/2} Delta(A)
double lp_default_radius(const LPInstance& lp);

struct FeasibilityResult {
  bool feasible = false;
  Vec x;
  long iterations = 0;
  long bound = 0;  // 2n(n+1) ln(R sqrt(n) h / eps)
  double max_violation = 0.0;
};

FeasibilityResult lp_feasibility(const LPInstance& lp, double eps, EllipsoidLog* log = nullptr);

struct RecoveryResult {
  Vec x;                           // double image of the exact point
  std::vector<std::string> exact;  // coordinates as reduced fractions "p/q"
  int rounds = 0;
  bool unchanged = false;          // input already exactly feasible
  int purify_steps = 0;            // moves towards a vertex with <c, x> nondecreasing
};

// eps0 = 1 / ((n+2) Delta(A)) with Delta from hadamard_delta
double recovery_eps0(const Mat& A);
// Exact feasible point from an eps0-feasible one; with c given, then moved to a vertex with no
// smaller objective. Integer A, b required.
RecoveryResult lp_exact_recovery(const LPInstance& lp, const Vec& x_tilde, double eps0);

struct LPResult {
  Status status = Status::IterBudget;
  Vec x;
  double value = 0.0;
  long ellipsoid_steps = 0;
  int levels = 0;
  std::optional<RecoveryResult> recovery;
};

// Objective levels are bisected; each level is an ellipsoid feasibility call on
// {Ax <= b, -<c,x> <= -t}. The final point goes through exact recovery when the
// data are integral.
LPResult lp_solve(const LPInstance& lp, double eps);

LPInstance klee_minty(int n);

}  // namespace optikit
