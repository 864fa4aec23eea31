#include "optikit/apps.hpp"
#include "optikit/gradient.hpp"

#include <cmath>

namespace optikit {

namespace {

struct InnerStats {
  long solves = 0, box_hits = 0;
  double max_ratio = 0.0;
};

// h(x) = mu sum x log x on the simplex
class EntropyTerm : public Composite {
 public:
  EntropyTerm(double mu, Dual2dOptions inner, std::shared_ptr<InnerStats> stats)
      : mu_(mu), inner_(inner), stats_(std::move(stats)) {}

  double value(const Vec& x) const override {
    double v = 0.0;
    for (int i = 0; i < x.size(); ++i)
      if (x[i] > 0) v += x[i] * std::log(x[i]);
    return mu_ * v;
  }
  Vec subgrad(const Vec& x) const override {
    if (x.minCoeff() <= 0) throw DomainError("entropy term: subgradient needs a positive point");
    return mu_ * (x.array().log() + 1.0).matrix();
  }
  Vec prox(const Geometry& geo, double alpha, const Vec& g, const Vec& u) const override {
    if (dynamic_cast<const EntropyGeometry*>(&geo)) {
      // x proportional to exp((log u - alpha g) / (1 + alpha mu))
      if (u.minCoeff() <= 0) throw DomainError("entropy prox: the prox center must be interior");
      Vec s = (u.array().log() - alpha * g.array()) / (1.0 + alpha * mu_);
      s.array() -= s.maxCoeff();
      Vec x = s.array().exp();
      return x / x.sum();
    }
    if (const auto* an = dynamic_cast<const ANormGeometry*>(&geo)) {
      const double k = an->kappa();
      Vec c = (alpha * g - an->grad_d(u)) / k;
      Dual2dResult r = dual2d_solve(c, an->a(), alpha * mu_ / k, an->center(), inner_);
      ++stats_->solves;
      if (r.box_active) ++stats_->box_hits;
      stats_->max_ratio =
          std::max(stats_->max_ratio, (std::abs(r.lambda[0]) + std::abs(r.lambda[1])) / r.C);
      return r.x;
    }
    throw InputError("entropy term: prox needs the entropy or a-norm geometry, got " + geo.name());
  }

 private:
  double mu_;
  Dual2dOptions inner_;
  std::shared_ptr<InnerStats> stats_;
};

}  // namespace

double lasso_value(const Mat& A, const Vec& b, double mu, const Vec& x) {
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] > 0) v += x[i] * std::log(x[i]);
  return 0.5 * (A * x - b).squaredNorm() + mu * v;
}

LassoResult lasso_entropy_simplex(const Mat& A, const Vec& b, const LassoOptions& o) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() != b.size() || n < 2) throw InputError("lasso: need A with n >= 2 columns and matching b");
  if (!(o.mu > 0) || !(o.eps > 0)) throw InputError("lasso: mu and eps must be positive");
  const double logn = std::log(static_cast<double>(n));
  LassoRegime regime = o.regime;
  if (regime == LassoRegime::Auto) regime = o.mu >= o.eps / (2.0 * logn) && n >= 3 ? LassoRegime::ANorm : LassoRegime::KL;
  if (regime == LassoRegime::ANorm && n < 3) throw InputError("lasso: the a-norm regime needs n >= 3 (a < 2)");

  // smoothness of 1/2 |Ax - b|^2 in the l1 norm
  const double L = std::max(A.colwise().squaredNorm().maxCoeff(), 1e-12);
  auto stats = std::make_shared<InnerStats>();
  auto h = std::make_shared<EntropyTerm>(o.mu, o.inner, stats);
  ModelOracle model = composite_model(least_squares_oracle(A, b), h);
  const Vec x0 = Vec::Constant(n, 1.0 / n);

  LassoResult res;
  res.regime = regime;
  if (regime == LassoRegime::KL) {
    EntropyGeometry geo(n);
    ModelOptions mo;
    mo.L0 = L;
    mo.N = o.max_iter;
    mo.R2 = logn;  // KL(x*, uniform) <= log n
    mo.eps = o.eps;
    res.report = adaptive_accelerated(model, geo, x0, mo);
  } else {
    ANormGeometry geo(n, x0, true);
    RestartOptions ro;
    ro.mu = o.mu;
    ro.L = L;
    ro.eps = o.eps;
    ro.R = 2.0;  // l1 diameter of the simplex
    res.predicted = restart_total_count(L, geo.omega(), o.mu, ro.R, o.eps);
    res.report = restart_strongly_convex(model, geo, x0, ro);
  }
  res.x = res.report.x;
  res.fval = lasso_value(A, b, o.mu, res.x);
  res.inner_solves = stats->solves;
  res.box_hits = stats->box_hits;
  res.max_lambda_ratio = stats->max_ratio;
  return res;
}

}  // namespace optikit
