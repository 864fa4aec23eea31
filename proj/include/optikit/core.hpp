#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace optikit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy. The CLI maps InputError to exit code 3.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ProtocolError : std::logic_error {
  using std::logic_error::logic_error;
};
struct ModelMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool all_finite(const Vec& x);

struct Eval {
  double f = 0.0;
  Vec g;
};

struct Smoothness {
  std::optional<double> L;    // Lipschitz gradient
  std::optional<double> M;    // Lipschitz value
  std::optional<double> mu;   // strong convexity
  std::optional<double> nu;   // Hoelder exponent
  std::optional<double> Lnu;  // Hoelder constant
};

struct Optimum {
  Vec x;
  double f = 0.0;
};

struct FirstOrderOracle {
  int dim = 0;
  std::function<Eval(const Vec&)> eval;
  Smoothness meta;
  std::optional<Optimum> opt;

  Eval operator()(const Vec& x) const;
  double value(const Vec& x) const { return (*this)(x).f; }
};

// --- first-order oracle library ---------------------------------------------

// f(x) = 1/2 <x, Ax> - <b, x>
FirstOrderOracle quadratic_oracle(const Mat& A, const Vec& b);
// f(x) = ||x - c||_2
FirstOrderOracle distance_oracle(const Vec& c);
// f(x) = sum |x_i|
FirstOrderOracle l1norm_oracle(int n);
// f(x) = 1/2 ||Ax - b||_2^2
FirstOrderOracle least_squares_oracle(const Mat& A, const Vec& b);
// f(x) = <c, x>
FirstOrderOracle linear_oracle(const Vec& c);
// f(x) = log sum exp(x_i)
FirstOrderOracle logsumexp_oracle(int n);

// --- (delta, L)-models --------------------------------------------------------

class Geometry;

// Additive convex term h in psi(x,y) = <g, x-y> + h(x) - h(y).
class Composite {
 public:
  virtual ~Composite() = default;
  virtual double value(const Vec& x) const = 0;
  virtual Vec subgrad(const Vec& x) const = 0;
  // argmin_{x in Q} alpha*(<g,x> + h(x)) + V(x,u)
  virtual Vec prox(const Geometry& geo, double alpha, const Vec& g, const Vec& u) const = 0;
};

struct ModelResponse {
  double F = 0.0;  // F_delta(y)
  Vec y;
  Vec g;           // linear part of psi
  std::shared_ptr<const Composite> h;

  double psi(const Vec& x) const;
  Vec psi_subgrad(const Vec& x) const;
};

class ModelOracle {
 public:
  int dim = 0;
  std::function<ModelResponse(const Vec&)> query;
  std::function<double(const Vec&)> true_value;  // only for tests
  Smoothness meta;
  std::optional<Optimum> opt;
};

// Exact first-order model of a smooth oracle: F_delta = f, psi = <grad f(y), x-y>.
ModelOracle gradient_model(const FirstOrderOracle& f);
// Composite model: f smooth, h handled exactly in psi.
ModelOracle composite_model(const FirstOrderOracle& f, std::shared_ptr<const Composite> h);

// 0 <= F(x) - F_delta(y) - psi(x,y) <= L V(x,y) + delta, tolerance 1e-9 (1+|F(x)|)
bool check_model(const ModelOracle& model, const Vec& x, const Vec& y, const Geometry& geo,
                 double delta, double L);

// --- noisy oracles ------------------------------------------------------------

struct NoiseRule {
  enum class Kind { ConstantOffset, RandomDirection };
  Kind kind = Kind::ConstantOffset;
  Vec offset;               // ConstantOffset: added to the gradient, norm scaled to delta1
  std::uint64_t seed = 0;   // RandomDirection
};

// Gradient error bounded by delta_grad in 2-norm; value error bounded by delta_value.
FirstOrderOracle perturb_oracle(const FirstOrderOracle& f, double delta_grad, double delta_value,
                                const NoiseRule& rule);

// --- traces -------------------------------------------------------------------

enum class Status { Converged, IterBudget, Infeasible, Error };
const char* status_name(Status s);

struct TraceRecord {
  long iter = 0;
  double fval = 0.0;
  double gap = 0.0;
  double feas = 0.0;
  double Lk = 0.0;
  long oracle_calls = 0;
  std::int64_t wall_ns = 0;
};

class Trace {
 public:
  void record(TraceRecord r);
  const std::vector<TraceRecord>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const TraceRecord& back() const { return rows_.back(); }
  void reset_clock();
  std::int64_t elapsed_ns() const;

 private:
  std::vector<TraceRecord> rows_;
  std::int64_t t0_ = 0;
};

struct Report {
  Status status = Status::IterBudget;
  Vec x;
  double fval = 0.0;
  double gap = 0.0;  // certified bound when available, NaN otherwise
  long iterations = 0;
  long oracle_calls = 0;
  Trace trace;
  std::string message;
  long first_violation = -1;  // first iteration contradicting a declared constant
};

Report finalize(Trace trace, Vec x, double eps);

std::string trace_header();
std::string trace_csv(const Trace& t, bool with_wall = true);

}  // namespace optikit
