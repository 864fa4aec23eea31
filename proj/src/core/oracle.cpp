#include "optikit/core.hpp"

#include <cmath>

namespace optikit {

bool all_finite(const Vec& x) { return x.allFinite(); }

Eval FirstOrderOracle::operator()(const Vec& x) const {
  if (x.size() != dim) throw InputError("oracle: dimension mismatch");
  if (!all_finite(x)) throw DomainError("oracle: non-finite point");
  return eval(x);
}

FirstOrderOracle quadratic_oracle(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw InputError("quadratic: shape mismatch");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw InputError("quadratic: A not symmetric");
  FirstOrderOracle o;
  o.dim = static_cast<int>(b.size());
  o.eval = [A, b](const Vec& x) {
    Vec Ax = A * x;
    return Eval{0.5 * x.dot(Ax) - b.dot(x), Ax - b};
  };
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  o.meta.L = lmax;
  o.meta.mu = std::max(0.0, lmin);
  o.meta.nu = 1.0;
  o.meta.Lnu = lmax;
  if (lmin > 1e-12 * std::max(1.0, lmax)) {
    Vec xs = A.ldlt().solve(b);
    o.opt = Optimum{xs, -0.5 * b.dot(xs)};
  }
  return o;
}

FirstOrderOracle distance_oracle(const Vec& c) {
  FirstOrderOracle o;
  o.dim = static_cast<int>(c.size());
  o.eval = [c](const Vec& x) {
    Vec r = x - c;
    double nr = r.norm();
    Vec g = nr > 0 ? Vec(r / nr) : Vec(Vec::Zero(r.size()));
    return Eval{nr, g};
  };
  o.meta.M = 1.0;
  o.meta.nu = 0.0;
  o.meta.Lnu = 2.0;
  o.opt = Optimum{c, 0.0};
  return o;
}

FirstOrderOracle l1norm_oracle(int n) {
  FirstOrderOracle o;
  o.dim = n;
  o.eval = [](const Vec& x) {
    Vec g = x.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
    return Eval{x.lpNorm<1>(), g};
  };
  o.meta.M = std::sqrt(static_cast<double>(n));
  o.meta.nu = 0.0;
  o.meta.Lnu = 2.0 * std::sqrt(static_cast<double>(n));
  o.opt = Optimum{Vec::Zero(n), 0.0};
  return o;
}

FirstOrderOracle least_squares_oracle(const Mat& A, const Vec& b) {
  if (A.rows() != b.size()) throw InputError("least squares: shape mismatch");
  FirstOrderOracle o;
  o.dim = static_cast<int>(A.cols());
  o.eval = [A, b](const Vec& x) {
    Vec r = A * x - b;
    return Eval{0.5 * r.squaredNorm(), A.transpose() * r};
  };
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  o.meta.L = es.eigenvalues().maxCoeff();
  o.meta.mu = std::max(0.0, es.eigenvalues().minCoeff());
  o.meta.nu = 1.0;
  o.meta.Lnu = *o.meta.L;
  return o;
}

FirstOrderOracle linear_oracle(const Vec& c) {
  FirstOrderOracle o;
  o.dim = static_cast<int>(c.size());
  o.eval = [c](const Vec& x) { return Eval{c.dot(x), c}; };
  o.meta.L = 0.0;
  o.meta.M = c.norm();
  return o;
}

FirstOrderOracle logsumexp_oracle(int n) {
  FirstOrderOracle o;
  o.dim = n;
  o.eval = [](const Vec& x) {
    double m = x.maxCoeff();
    Vec e = (x.array() - m).exp().matrix();
    double s = e.sum();
    return Eval{m + std::log(s), e / s};
  };
  o.meta.L = 1.0;
  o.meta.M = 1.0;
  return o;
}

}  // namespace optikit
