#include "optikit/apps.hpp"
#include "optikit/frank_wolfe.hpp"

#include <cmath>

namespace optikit {

BallResult min_enclosing_ball(const Mat& X, double eps, long max_iter) {
  const int m = static_cast<int>(X.cols());
  if (m < 1 || X.rows() < 1) throw InputError("meb: need at least one point");
  if (!(eps > 0)) throw InputError("meb: eps must be positive");
  const Vec q = X.colwise().squaredNorm().transpose();
  // dual: max_{lambda in simplex} <lambda, q> - |X lambda|^2, minimized here as its negative
  FirstOrderOracle f;
  f.dim = m;
  f.eval = [&X, &q](const Vec& l) {
    Vec c = X * l;
    return Eval{c.squaredNorm() - l.dot(q), 2.0 * X.transpose() * c - q};
  };
  FWOptions o;
  o.N = max_iter;
  o.x0_id = 0;
  // the gap is max_i |x_i - c|^2 - D, so this is radius <= (1 + eps) sqrt(D)
  const double s = (1.0 + eps) * (1.0 + eps);
  o.stop = [s](const Vec&, const Eval& e, double gap) {
    const double D = -e.f;
    return gap + D <= s * D;
  };
  FWLog log;
  Vec l0 = Vec::Zero(m);
  l0[0] = 1.0;
  BallResult res;
  res.report = frank_wolfe(f, simplex_lmo(m), l0, o, &log);
  res.lambda = res.report.x;
  res.center = X * res.lambda;
  res.radius = (X.colwise() - res.center).colwise().norm().maxCoeff();
  const double D = res.lambda.dot(q) - res.center.squaredNorm();
  res.dual = std::sqrt(std::max(0.0, D));
  res.iterations = res.report.iterations;
  res.nnz = std::move(log.nnz);
  res.report.fval = res.radius;
  return res;
}

}  // namespace optikit
