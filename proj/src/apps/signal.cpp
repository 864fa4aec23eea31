#include "optikit/apps.hpp"

#include <cmath>

namespace optikit {

SignalResult l1_signal_approx(const Mat& S, const Vec& Y, double r, double eps, long N) {
  if (S.rows() != Y.size() || S.cols() < 1) throw InputError("signal: dimensions of S and Y disagree");
  if (!(r > 0)) throw InputError("signal: r must be positive");
  if (N < 0) throw InputError("signal: N must be nonnegative");
  const int n = static_cast<int>(S.cols());
  const Vec target = Y / r;
  SignalResult res;
  res.mhat = S.colwise().norm().maxCoeff();
  // z = S x - Y/r, updated as (1 - gamma) z + gamma (+-s_i - Y/r)
  Vec x = Vec::Zero(n);
  Vec z = -target;
  Trace tr;
  bool converged = false;
  long k = 0;
  for (;; ++k) {
    Vec g = S.transpose() * z;
    Eigen::Index i = 0;
    const double gi = g.cwiseAbs().maxCoeff(&i);
    double xg = 0.0;
    for (int j = 0; j < n; ++j)
      if (x[j] != 0.0) xg += x[j] * g[j];
    const double gap = xg + gi;  // <g, x - v>, v = -sign(g_i) e_i
    const double fv = 0.5 * z.squaredNorm();
    res.fvals.push_back(fv);
    res.gaps.push_back(gap);
    tr.record({k, fv, gap, 0.0, res.mhat * res.mhat, k + 1, 0});
    if (eps > 0 && gap <= eps) {
      converged = true;
      break;
    }
    if (k == N) break;
    const double gamma = 2.0 / (static_cast<double>(k) + 2.0);
    const double sgn = g[i] > 0 ? -1.0 : 1.0;
    x *= 1.0 - gamma;
    x[i] += gamma * sgn;
    z = (1.0 - gamma) * z + gamma * (sgn * S.col(i) - target);
  }
  res.x = x;
  res.fval = res.fvals.back();
  res.gap = res.gaps.back();
  res.report = finalize(std::move(tr), x, eps > 0 ? eps : -1.0);
  res.report.oracle_calls = k + 1;
  if (converged) res.report.status = Status::Converged;
  return res;
}

}  // namespace optikit
