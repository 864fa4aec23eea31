#pragma once

#include "optikit/core.hpp"
#include "optikit/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace optikit {

// --- max tree -------------------------------------------------------------------
// Tournament tree over N leaves (padded to a power of two). Untouched leaves hold 0.
// Only nodes whose value differs from the all-zero state are stored.
class MaxTree {
 public:
  explicit MaxTree(long leaves);
  long leaves() const { return n_; }
  int height() const { return q_; }  // internal levels; ceil log2 N
  // returns the number of internal nodes rewritten (<= height())
  int update(long leaf, double value);
  double leaf(long i) const;
  double max() const;
  long argmax() const;  // lowest index on ties
  std::size_t stored() const { return nodes_.size() + leaves_.size(); }

 private:
  struct Entry {
    double v;
    long i;
  };
  Entry node(long id) const;  // heap layout, root 1, leaves at P..2P-1
  Entry fresh(long id) const;
  long n_, p_;
  int q_;
  std::unordered_map<long, Entry> nodes_;
  std::unordered_map<long, double> leaves_;
};

// --- truss topology -----------------------------------------------------------------
using SparseVec = std::vector<std::pair<int, double>>;

struct TrussInstance {
  int dofs = 0;               // free displacement coordinates
  std::vector<SparseVec> a;   // bar interaction vectors on the free coordinates
  Vec f;                      // load on the free coordinates
  double M = 1.0;             // total mass
  // planar layout, for reporting only
  Mat nodes;
  std::vector<std::array<int, 2>> bars;
};

// Planar truss: bar i joins nodes p, q; a_i = (e_q - e_p) (x) u / l with u the unit direction.
// Coordinates of fixed nodes are dropped; bars with both ends fixed are dropped.
TrussInstance truss_from_layout(const Mat& nodes, const std::vector<std::array<int, 2>>& bars,
                                const std::vector<int>& fixed, const Vec& load, double M);
TrussInstance truss_two_bar();
// cols x rows unit grid, neighbours and both diagonals, left column fixed, unit downward
// load at the lower right node
TrussInstance truss_grid(int cols, int rows);

struct TrussOptions {
  double eps = 1e-2;
  double B = 0.0;             // y is kept in [-B, B]^dofs; 0: sqrt(d) / sigma_min(A)
  long N = 0;                 // 0: switching count for the box
  long check_every = 2000;    // certificate evaluation period; 0: only at the end
  bool stop_on_certificate = true;
};

struct TrussResult {
  Vec m, x;                   // masses and displacements
  Vec y;                      // averaged productive iterate
  Vec lambda;                 // per-bar multipliers from the step counts
  double primal = 0.0;        // <f, y_hat>
  double dual = 0.0;          // sum mu + B |f - A^T (mu+ - mu-)|_1
  double gap = 0.0;           // dual - primal
  double violation = 0.0;     // max(0, max_i |<a_i, y_hat>| - 1)
  double compliance = 0.0;    // <f, x>
  double residual = 0.0;      // |A(m) x - f|_2
  double B = 0.0;
  long productive = 0, nonproductive = 0;
  int max_writes = 0;         // worst max-tree writes per update
  long tree_height = 0;
  Report report;
};

// Rigidity check: A(e) must be positive definite, otherwise ModelMismatch.
void truss_check_rigid(const TrussInstance& t);
TrussResult truss_solve(const TrussInstance& t, const TrussOptions& opt);

// --- D-optimal design -----------------------------------------------------------------
// F(x) = -log det(H X H^T) on the simplex
double dopt_value(const Mat& H, const Vec& x);
Vec dopt_grad(const Mat& H, const Vec& x);
// max_j h_j^T (H X H^T)^{-1} h_j
double dopt_audit(const Mat& H, const Vec& x);
// c_j > -theta for all j, sum_j 1/(c_j + theta) = 1
double dopt_theta(const Vec& c, double tol = 1e-14);

struct DoptOptions {
  double eps = 1e-2;
  std::optional<double> initial_gap;  // F(x0) - F*; default: max_j w_j(x0) - m
  long N = 0;                         // 0: the count for initial_gap and eps
};
long dopt_iterations(int n, double gap0, double eps);
// Fixed step L = 1 mirror descent in the -sum log geometry; output x_N.
Report dopt_design(const Mat& H, const DoptOptions& opt);
// Multiplicative fixed point x_j <- x_j w_j(x) / m, for reference values.
Vec dopt_multiplicative(const Mat& H, long iters);

// --- entropic optimal transport -------------------------------------------------------
struct TransportInstance {
  Mat C;
  Vec mu, nu;
  double r = 1.0;
};

// H*_nu(lambda) = r sum_j nu_j log((1/nu_j) sum_i exp((-c_ij + lambda_i)/r)), and its gradient
double ot_conjugate(const Mat& C, const Vec& nu, double r, const Vec& lambda, Vec* grad = nullptr);
// lambda^T mu - H*_nu(lambda)
double ot_dual_value(const TransportInstance& t, const Vec& lambda);
// joint form: lambda^T mu + beta^T nu - r sum exp((-c_ij + lambda_i + beta_j)/r - 1)
double ot_joint_dual_value(const TransportInstance& t, const Vec& lambda, const Vec& beta);
// x_ij = nu_j softmax_i((-c_ij + lambda_i)/r)
Mat ot_plan(const TransportInstance& t, const Vec& lambda);
double ot_primal_value(const TransportInstance& t, const Mat& plan);

struct OTResult {
  double value = 0.0;  // dual value at lambda
  Vec lambda;          // sum lambda = 0
  Mat plan;
  double primal = 0.0;
  double grad_norm = 0.0;
  long oracle_calls = 0;
  Report report;
};
OTResult entropic_ot(const TransportInstance& t, double tol = 1e-10, long max_rounds = 200);
// Log-domain Sinkhorn fixed point; returns the plan.
Mat sinkhorn(const TransportInstance& t, double tol = 1e-13, long max_iter = 1000000);
// Exact OT linear program by vertex enumeration of permutation-free bases (n <= 4).
double ot_exact_lp(const Mat& C, const Vec& mu, const Vec& nu);

struct BarycenterResult {
  Vec mu;                  // average of the recovered measures
  std::vector<Vec> parts;  // grad H*_{nu_i}(lambda_i), i = 1..s
  double objective = 0.0;  // sum_i W_{2,r}(mu_i, nu_i)^2 at the dual point
  double consistency = 0.0;  // max_i |parts_i - mu|_1
  Report report;
};
// Equal weights. Minimizes sum_{i<s} H*_i(lambda_i) + H*_s(-sum_{i<s} lambda_i).
BarycenterResult barycenter(const std::vector<Vec>& nus, const Mat& C, double r, double eps,
                            long max_rounds = 400);
// sum_i W_{2,r}(mu, nu_i)^2 evaluated with Sinkhorn
double barycenter_objective(const Vec& mu, const std::vector<Vec>& nus, const Mat& C, double r);

// --- minimum enclosing ball -----------------------------------------------------------
struct BallResult {
  Vec center;
  double radius = 0.0;
  Vec lambda;
  double dual = 0.0;  // sqrt of the dual value, a lower bound on the optimal radius
  long iterations = 0;
  std::vector<long> nnz;  // nonzeros of lambda^k
  Report report;
};
// points in columns; stops when radius <= (1 + eps) * dual
BallResult min_enclosing_ball(const Mat& X, double eps, long max_iter = 10000000);

// --- l1 signal approximation ----------------------------------------------------------
struct SignalResult {
  Vec x;
  double fval = 0.0;   // 1/2 |Y/r - Sx|^2
  double gap = 0.0;
  double mhat = 0.0;   // max column norm
  std::vector<double> fvals, gaps;
  Report report;
};
// min_{|x|_1 <= 1} 1/2 |Y/r - S x|^2 by Frank-Wolfe with the residual updated in place
SignalResult l1_signal_approx(const Mat& S, const Vec& Y, double r, double eps, long N);

// --- 2-D dual subsolver ---------------------------------------------------------------
// min_{x in simplex} c^T x + |x - z|_a^2 + gamma sum x log x, via the dual in (lambda1, lambda2)
struct Dual2dOptions {
  double eps = 1e-10;    // dual accuracy for the ellipsoid run
  double sigma = 1e-11;  // per-coordinate golden-section tolerance
  long max_iter = 0;     // 0: ellipsoid count
};
struct Dual2dResult {
  Vec x;
  std::array<double, 2> lambda{0.0, 0.0};
  double C = 0.0;          // box radius 6|c|_inf + 4 gamma log(2n) + 16
  double dual = 0.0;       // G(lambda)
  double primal = 0.0;     // objective at x
  bool box_active = false; // |lambda|_1 within 1e-6 C of the box
  long iterations = 0;
};
Dual2dResult dual2d_solve(const Vec& c, double a, double gamma, const Vec& z,
                          const Dual2dOptions& opt = {});
double dual2d_box(const Vec& c, double gamma);
double dual2d_primal(const Vec& c, double a, double gamma, const Vec& z, const Vec& x);

// --- entropy-regularized least squares on the simplex ---------------------------------
// F(x) = 1/2 |Ax - b|^2 + mu sum x log x
enum class LassoRegime { Auto, KL, ANorm };
struct LassoOptions {
  double mu = 1e-2;
  double eps = 1e-4;
  LassoRegime regime = LassoRegime::Auto;  // Auto: a-norm restarts when mu >= eps/(2 log n)
  long max_iter = 100000;                  // KL regime budget
  Dual2dOptions inner;
};
struct LassoResult {
  Vec x;
  double fval = 0.0;
  LassoRegime regime = LassoRegime::KL;
  long inner_solves = 0;
  long box_hits = 0;          // inner duals with an active box
  double max_lambda_ratio = 0.0;  // max |lambda|_1 / C over inner solves
  long predicted = 0;         // restart count for the a-norm regime, 0 otherwise
  Report report;
};
double lasso_value(const Mat& A, const Vec& b, double mu, const Vec& x);
LassoResult lasso_entropy_simplex(const Mat& A, const Vec& b, const LassoOptions& opt);

}  // namespace optikit
