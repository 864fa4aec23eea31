#pragma once

#include "optikit/core.hpp"
#include "optikit/geometry.hpp"
#include "optikit/gradient.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace optikit::cli {

// Exit codes of the benchmark harness.
constexpr int kExitConverged = 0;
constexpr int kExitFailure = 1;    // solver error, failed verification
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;
int exit_code(Status s);

struct LinearConstraint {
  Vec a;
  double b = 0.0;  // <a, x> - b <= 0
};

// A problem file: {"type": ..., data..., optional "x0", "set", "R", "M", "L", "mu", "fstar",
// "xstar", "constraints"}. Types: quadratic (A, b), least_squares (A, b), distance (c),
// l1norm (n), linear (c), logsumexp (n), expression (text, n).
struct Problem {
  std::string type;
  FirstOrderOracle f;
  std::optional<QuadraticProblem> quad;
  std::string set_spec = "whole";
  FeasibleSet set;
  Vec x0;
  std::optional<double> R, M, L, mu, fstar;
  std::vector<LinearConstraint> constraints;
};
Problem parse_problem(const std::string& json_text);  // InputError on malformed input
Problem load_problem(const std::string& path);
// "gen:quadratic:n" (spectrum in [0.01, 1]) or "gen:lsq:m:n", drawn from the seed
Problem generate_problem(const std::string& spec, std::uint64_t seed);
FeasibleSet parse_set(const std::string& spec, int n);

struct RunConfig {
  std::string method;
  std::string problem;       // path
  std::optional<double> eps;
  std::optional<long> N;
  std::string geometry = "euclid";
  std::optional<double> L0;
  std::optional<double> mu;
  std::uint64_t seed = 0;
  std::string out;           // CSV path, empty: none
  std::string policy = "fixed-r";
  std::string set;           // overrides the problem's set
};
struct RunOutcome {
  Report report;
  double final_gap = 0.0;    // certified gap, or f - f* when f* is known
  int code = kExitInput;
};
RunOutcome run_method(const RunConfig& cfg, const Problem& p);
const std::vector<std::string>& method_names();

// --- bound verification ------------------------------------------------------------
struct VerifyResult {
  std::string theorem;
  std::vector<long> iter;
  std::vector<double> lhs, bound;
  std::vector<bool> ok;
  long first_violation = -1;  // row index
  bool pass() const { return first_violation < 0; }
};
// Theorem ids and their parameters:
//   subgradient   gap_N <= M R / sqrt(N), last row only         (M, R)
//   ellipsoid     calls <= ceil(2 n^2 ln(M R / eps)) every row   (n, M, R, eps)
//   gd            f_k - fstar <= L R^2 / (4 k)                   (L, R, fstar)
//   accelerated   f_k - fstar <= 8 L R2 / (k + 1)^2              (L, R2, fstar)
//   fw            f_k - fstar <= 2 L R^2 / (k + 2)               (L, R, fstar)
//   meta          f_k - fstar <= 4 H R^2 / k^2                   (H, R, fstar)
//   restart       f_k - fstar <= gap_k on rows with a finite gap  (fstar)
//   gap           gap_k <= eps on the last row                    (eps)
VerifyResult verify_bounds(const std::vector<TraceRecord>& rows, const std::string& theorem,
                           const std::map<std::string, double>& params);
const std::vector<std::string>& theorem_names();
std::vector<TraceRecord> parse_trace_csv(const std::string& text);

// Entry point of the optikit binary.
int main_entry(int argc, char** argv);

}  // namespace optikit::cli
