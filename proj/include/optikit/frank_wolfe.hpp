#pragma once

#include "optikit/core.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace optikit {

struct Vertex {
  Vec y;
  long id = -1;  // stable vertex label; -1 when the set has no finite labelling
};

struct LinearMinOracle {
  std::string name;
  std::function<Vertex(const Vec& g)> solve;
  std::function<bool(const Vec& x)> contains;  // membership with a small tolerance
};

// +-r e_i with i = argmax |g_i| (lowest on ties), sign opposite to g_i
Vec lmo_l1(const Vec& g, double r);
// e_i with i = argmin g_i (lowest on ties)
Vec lmo_simplex(const Vec& g);
// lo_i where g_i > 0, hi_i otherwise
Vec lmo_box(const Vec& g, const Vec& lo, const Vec& hi);

LinearMinOracle l1_lmo(int n, double r);
LinearMinOracle simplex_lmo(int n);
LinearMinOracle box_lmo(Vec lo, Vec hi);
// Q = { U t : |t_i| <= 1 }, generators in the columns of U; min <g, y> = -sum |<g, u_i>|
LinearMinOracle zonotope_lmo(Mat U);
LinearMinOracle make_lmo(const std::string& spec, int n);  // "l1:r", "simplex", "box"

// <g, x - lmo(g)>
double fw_gap(const Vec& x, const Vec& g, const LinearMinOracle& lmo);

struct FWOptions {
  long N = 100;
  double eps = 0.0;  // > 0: stop once the gap certificate is <= eps
  long x0_id = -1;   // vertex label of x0; -1 disables the vertex-combination bookkeeping
  // optional extra stopping rule, polled after each gap evaluation
  std::function<bool(const Vec& x, const Eval& e, double gap)> stop;
};

struct FWLog {
  std::vector<long> vertex_ids;     // LMO answers y_0, y_1, ...
  std::vector<long> nnz;            // nonzeros of x_0, x_1, ...
  std::vector<double> fval, gap;    // f(x_k) and the certificate at x_k
  std::map<long, double> weights;   // x_N as a convex combination of labelled vertices
};

// x_{k+1} = (1 - gamma_k) x_k + gamma_k y_k, gamma_k = 2/(k+2). Trace gap column = fw_gap(x_k).
Report frank_wolfe(const FirstOrderOracle& f, const LinearMinOracle& lmo, const Vec& x0,
                   const FWOptions& opt, FWLog* log = nullptr);
double fw_bound(double L, double R, long k);  // 2 L R^2 / (k + 2)

}  // namespace optikit
