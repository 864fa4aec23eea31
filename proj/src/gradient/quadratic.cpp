#include "optikit/gradient.hpp"

#include <cmath>
#include <limits>

namespace optikit {

QuadraticProblem QuadraticProblem::make(Mat A, Vec b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw InputError("quadratic: shape mismatch");
  if (!A.isApprox(A.transpose(), 1e-12)) throw InputError("quadratic: A must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
  QuadraticProblem q;
  q.mu = std::max(0.0, es.eigenvalues().minCoeff());
  q.L = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, q.L))
    throw InputError("quadratic: A must be positive semidefinite");
  q.A = std::move(A);
  q.b = std::move(b);
  return q;
}

Vec QuadraticProblem::solution() const {
  Eigen::LDLT<Mat> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw NumericalError("quadratic: factorization failed");
  return ldlt.solve(b);
}

FirstOrderOracle QuadraticProblem::oracle() const {
  FirstOrderOracle f = quadratic_oracle(A, b);
  f.meta.L = L;
  f.meta.mu = mu;
  if (mu > 0) {
    Vec xs = solution();
    f.opt = Optimum{xs, value(xs)};
  }
  return f;
}

double gd_bound(double L, double R, long N) {
  return L * R * R / (4.0 * static_cast<double>(N));
}

Report gd_fixed(const FirstOrderOracle& f, double L, const Vec& x0, long N, const Geometry* geo,
                IterateLog* log) {
  if (x0.size() != f.dim) throw InputError("gd: x0 dimension");
  if (!(L > 0)) throw InputError("gd: L must be positive");
  if (N < 0) throw InputError("gd: N must be nonnegative");
  Vec x = geo ? project_euclidean(geo->set(), x0) : x0;
  Eval e = f(x);
  long calls = 1, first_violation = -1;
  Trace tr;
  if (log) log->push_back(x);
  for (long k = 0; k < N; ++k) {
    Vec xn = geo ? geo->mirror_step(x, e.g, 1.0 / L) : Vec(x - e.g / L);
    Eval en = f(xn);
    ++calls;
    Vec d = xn - x;
    double dist2 = geo ? 2.0 * geo->bregman(xn, x) : d.squaredNorm();
    double upper = e.f + e.g.dot(d) + 0.5 * L * dist2;
    if (first_violation < 0 && en.f > upper + 1e-12 * (1.0 + std::abs(upper))) first_violation = k;
    x = std::move(xn);
    e = std::move(en);
    double gap = f.opt ? e.f - f.opt->f : std::numeric_limits<double>::quiet_NaN();
    tr.record({k + 1, e.f, gap, 0.0, L, calls, tr.elapsed_ns()});
    if (log) log->push_back(x);
  }
  Report r = finalize(std::move(tr), x, 0.0);
  r.fval = e.f;
  r.iterations = N;
  r.oracle_calls = calls;
  r.first_violation = first_violation;
  r.gap = f.opt ? e.f - f.opt->f : std::numeric_limits<double>::quiet_NaN();
  r.status = Status::IterBudget;
  if (first_violation >= 0) r.message = "descent inequality violated: declared L is too small";
  return r;
}

namespace {

Report quad_report(const QuadraticProblem& q, Trace tr, Vec x, long N, long calls) {
  Report r = finalize(std::move(tr), std::move(x), 0.0);
  r.fval = q.value(r.x);
  r.iterations = N;
  r.oracle_calls = calls;
  r.gap = std::numeric_limits<double>::quiet_NaN();
  r.status = Status::IterBudget;
  return r;
}

void quad_record(Trace& tr, const QuadraticProblem& q, long k, const Vec& x, long calls, double Lk) {
  tr.record({k, q.value(x), q.grad(x).norm(), 0.0, Lk, calls, tr.elapsed_ns()});
}

}  // namespace

double chebyshev_factor(double mu, double L, long N) {
  double xi = (std::sqrt(L) + std::sqrt(mu)) / (std::sqrt(L) - std::sqrt(mu));
  double p = std::pow(xi, static_cast<double>(N));
  if (!std::isfinite(p)) return 0.0;
  return 2.0 / (p + 1.0 / p);
}

Report chebyshev(const QuadraticProblem& q, const Vec& x0, long N, IterateLog* log) {
  if (x0.size() != q.b.size()) throw InputError("chebyshev: x0 dimension");
  if (!(q.mu > 0) || !(q.mu < q.L)) throw InputError("chebyshev: requires 0 < mu < L");
  const double L = q.L, mu = q.mu;
  const double theta = (L + mu) / (L - mu);
  Trace tr;
  Vec x = x0;
  if (log) log->push_back(x);
  if (N == 0) return quad_report(q, std::move(tr), x, 0, 0);
  // delta_k = T_k(theta) / T_{k+1}(theta)
  double delta = 1.0 / (2.0 * theta - 1.0 / theta);
  Vec prev = x;
  x = x - 2.0 / (L + mu) * q.grad(x);
  long calls = 1;
  quad_record(tr, q, 1, x, calls, L);
  if (log) log->push_back(x);
  for (long k = 1; k < N; ++k) {
    Vec next = x - 4.0 * delta / (L - mu) * q.grad(x) + (2.0 * delta * theta - 1.0) * (x - prev);
    ++calls;
    prev = std::move(x);
    x = std::move(next);
    delta = 1.0 / (2.0 * theta - delta);
    quad_record(tr, q, k + 1, x, calls, L);
    if (log) log->push_back(x);
  }
  return quad_report(q, std::move(tr), x, N, calls);
}

Report heavy_ball(const QuadraticProblem& q, const Vec& x0, long N, IterateLog* log) {
  if (x0.size() != q.b.size()) throw InputError("heavy_ball: x0 dimension");
  if (!(q.L > 0)) throw InputError("heavy_ball: L must be positive");
  const double sL = std::sqrt(q.L), sm = std::sqrt(q.mu);
  const double step = 4.0 / ((sL + sm) * (sL + sm));
  const double mom = std::pow((sL - sm) / (sL + sm), 2);
  Trace tr;
  Vec x = x0, prev = x0;
  if (log) log->push_back(x);
  long calls = 0;
  for (long k = 0; k < N; ++k) {
    Vec next = x - step * q.grad(x) + mom * (x - prev);
    ++calls;
    prev = std::move(x);
    x = std::move(next);
    quad_record(tr, q, k + 1, x, calls, q.L);
    if (log) log->push_back(x);
  }
  return quad_report(q, std::move(tr), x, N, calls);
}

double cg_bound(double mu, double L, double R, long N) {
  double n = static_cast<double>(N);
  double a = L * R * R / (2.0 * (2.0 * n + 1.0) * (2.0 * n + 1.0));
  double b = 2.0 * L * R * R * std::exp(-2.0 * std::sqrt(mu / L) * n);
  return std::min(a, b);
}

Report conjugate_gradient(const QuadraticProblem& q, const Vec& x0, long N, double tol,
                          IterateLog* log) {
  if (x0.size() != q.b.size()) throw InputError("cg: x0 dimension");
  Trace tr;
  Vec x = x0, prev = x0;
  if (log) log->push_back(x);
  long calls = 0, k = 0;
  bool converged = false;
  for (; k < N; ++k) {
    Vec r = q.grad(x);
    ++calls;
    double rr = r.squaredNorm();
    if (rr == 0.0 || std::sqrt(rr) <= tol) {
      converged = true;
      break;
    }
    Vec Ar = q.A * r;
    double rAr = r.dot(Ar);
    Vec p = x - prev;
    Vec next;
    bool two_term = false;
    if (k > 0 && p.squaredNorm() > 0) {
      Vec Ap = q.A * p;
      double pAp = p.dot(Ap), pAr = p.dot(Ar), rp = r.dot(p);
      double D = rAr * pAp - pAr * pAr;
      if (D > 0 && std::isfinite(D)) {
        double alpha = (rr * pAp - rp * pAr) / D;
        double beta = (rr * pAr - rp * rAr) / D;
        next = x - alpha * r + beta * p;
        two_term = std::isfinite(alpha) && std::isfinite(beta);
      }
    }
    if (!two_term) {
      if (!(rAr > 0)) {
        converged = true;  // r lies in the kernel of A: no descent direction left
        break;
      }
      next = x - rr / rAr * r;
    }
    prev = std::move(x);
    x = std::move(next);
    quad_record(tr, q, k + 1, x, calls, q.L);
    if (log) log->push_back(x);
  }
  Report r = quad_report(q, std::move(tr), x, k, calls);
  if (converged) r.status = Status::Converged;
  return r;
}

}  // namespace optikit
