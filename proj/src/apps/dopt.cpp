#include "optikit/apps.hpp"
#include "optikit/univariate.hpp"

#include <cmath>
#include <sstream>

namespace optikit {

namespace {

Eigen::LLT<Mat> info_factor(const Mat& H, const Vec& x) {
  if (x.size() != H.cols()) throw InputError("dopt: design dimension");
  Mat Mx = H * x.asDiagonal() * H.transpose();
  Eigen::LLT<Mat> llt(Mx);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "dopt: H X H^T is not positive definite (min x = " << x.minCoeff() << ", m = " << H.rows()
       << ", n = " << H.cols() << ")";
    throw NumericalError(os.str());
  }
  return llt;
}

// w_j = h_j^T (H X H^T)^{-1} h_j
Vec leverages(const Mat& H, const Vec& x) {
  auto llt = info_factor(H, x);
  Mat Z = llt.matrixL().solve(H);
  return Z.colwise().squaredNorm().transpose();
}

}  // namespace

double dopt_value(const Mat& H, const Vec& x) {
  auto llt = info_factor(H, x);
  return -2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Vec dopt_grad(const Mat& H, const Vec& x) { return -leverages(H, x); }

double dopt_audit(const Mat& H, const Vec& x) { return leverages(H, x).maxCoeff(); }

double dopt_theta(const Vec& c, double tol) {
  if (c.size() < 1 || !c.allFinite()) throw InputError("dopt: bad scalar-step data");
  const double cmin = c.minCoeff();
  const double n = static_cast<double>(c.size());
  // the root lies in [1 - cmin, n - cmin]
  auto phi = [&](double th) { return (1.0 / (c.array() + th)).sum() - 1.0; };
  auto dphi = [&](double th) { return -(1.0 / (c.array() + th).square()).sum(); };
  return newton_scalar(phi, dphi, 1.0 - cmin, tol, -cmin, n - cmin + 1.0);
}

long dopt_iterations(int n, double gap0, double eps) {
  if (!(eps > 0)) throw InputError("dopt: eps must be positive");
  if (gap0 <= 0.5 * eps) return 0;
  return static_cast<long>(std::ceil(2.0 * n * std::log(2.0 * gap0 / eps) / eps));
}

Report dopt_design(const Mat& H, const DoptOptions& o) {
  const int m = static_cast<int>(H.rows()), n = static_cast<int>(H.cols());
  if (m < 1 || n < m) throw InputError("dopt: need n >= m >= 1");
  if (!(o.eps > 0)) throw InputError("dopt: eps must be positive");
  Vec x = Vec::Constant(n, 1.0 / n);
  Vec w = leverages(H, x);
  const double gap0 = o.initial_gap ? *o.initial_gap : w.maxCoeff() - m;
  const long N = o.N > 0 ? o.N : dopt_iterations(n, gap0, o.eps);

  // F(x) - F* <= m log(max_j w_j / m), from det(K)^{1/m} <= tr(K)/m
  auto cert = [m](const Vec& ww) { return m * std::log(ww.maxCoeff() / m); };
  Trace tr;
  tr.record({0, dopt_value(H, x), cert(w), 0.0, 1.0, 1, 0});
  for (long k = 0; k < N; ++k) {
    Vec c = -w + x.cwiseInverse();  // step 1/L with L = 1
    const double th = dopt_theta(c);
    x = (c.array() + th).inverse().matrix();
    x /= x.sum();
    w = leverages(H, x);
    tr.record({k + 1, dopt_value(H, x), cert(w), 0.0, 1.0, k + 2, 0});
  }
  Report r = finalize(std::move(tr), x, o.eps);
  r.iterations = N;
  r.oracle_calls = N + 1;
  return r;
}

Vec dopt_multiplicative(const Mat& H, long iters) {
  const int m = static_cast<int>(H.rows()), n = static_cast<int>(H.cols());
  Vec x = Vec::Constant(n, 1.0 / n);
  for (long k = 0; k < iters; ++k) {
    x = x.cwiseProduct(leverages(H, x)) / m;
    x /= x.sum();
  }
  return x;
}

}  // namespace optikit
