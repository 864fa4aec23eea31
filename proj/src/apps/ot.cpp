#include "optikit/apps.hpp"
#include "optikit/gradient.hpp"

#include <cmath>
#include <limits>

namespace optikit {

namespace {

void check_instance(const Mat& C, const Vec& mu, const Vec& nu, double r) {
  if (!(r > 0)) throw InputError("ot: r must be positive");
  if (C.rows() != mu.size() || C.cols() != nu.size() || C.rows() == 0)
    throw InputError("ot: cost and marginal dimensions disagree");
  if (!C.allFinite()) throw InputError("ot: cost matrix must be finite");
  for (const Vec* v : {&mu, &nu})
    if (v->minCoeff() < 0 || std::abs(v->sum() - 1.0) > 1e-9) throw InputError("ot: marginals must lie on the simplex");
}

// column j of exp((-c_ij + lambda_i)/r), normalized; returns the log of the normalizer
double softmax_column(const Mat& C, const Vec& lambda, double r, int j, Vec& p) {
  p = (lambda - C.col(j)) / r;
  const double top = p.maxCoeff();
  p = (p.array() - top).exp().matrix();
  const double s = p.sum();
  p /= s;
  return top + std::log(s);
}

double xlogx(double v) { return v > 0 ? v * std::log(v) : 0.0; }

// minimizes phi with the accelerated method in rounds of N steps until |grad| <= tol. L is the
// global gradient constant; a value-based acceptance test cannot resolve steps once
// |grad|^2 / L falls below the round-off in phi, so the step is fixed.
struct RoundResult {
  Vec x;
  double gnorm = 0.0;
  long calls = 0;
  Trace trace;
};

RoundResult accelerate_rounds(const FirstOrderOracle& phi, Vec x, double L, double tol, long max_rounds,
                              const std::function<void(Vec&)>& gauge) {
  EuclideanGeometry geo;
  ModelOracle model = gradient_model(phi);
  RoundResult out;
  long iters = 0;
  for (long round = 0; round < max_rounds; ++round) {
    ModelOptions mo;
    mo.L0 = L;
    mo.N = 100;
    mo.adaptive = false;
    Report s = adaptive_accelerated(model, geo, x, mo);
    x = s.x;
    if (gauge) gauge(x);
    Eval e = phi(x);
    out.calls += s.oracle_calls + 1;
    iters += s.iterations;
    out.gnorm = e.g.norm();
    out.trace.record({iters, e.f, out.gnorm, 0.0, L, out.calls, 0});
    if (out.gnorm <= tol) break;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace

double ot_conjugate(const Mat& C, const Vec& nu, double r, const Vec& lambda, Vec* grad) {
  if (lambda.size() != C.rows() || nu.size() != C.cols()) throw InputError("ot: conjugate dimensions");
  double v = 0.0;
  if (grad) *grad = Vec::Zero(C.rows());
  Vec p;
  for (int j = 0; j < C.cols(); ++j) {
    if (nu[j] == 0.0) continue;
    const double lse = softmax_column(C, lambda, r, j, p);
    v += nu[j] * (lse - std::log(nu[j]));
    if (grad) *grad += nu[j] * p;
  }
  return r * v;
}

double ot_dual_value(const TransportInstance& t, const Vec& lambda) {
  check_instance(t.C, t.mu, t.nu, t.r);
  return lambda.dot(t.mu) - ot_conjugate(t.C, t.nu, t.r, lambda);
}

double ot_joint_dual_value(const TransportInstance& t, const Vec& lambda, const Vec& beta) {
  check_instance(t.C, t.mu, t.nu, t.r);
  double s = 0.0;
  for (int i = 0; i < t.C.rows(); ++i)
    for (int j = 0; j < t.C.cols(); ++j) s += std::exp((-t.C(i, j) + lambda[i] + beta[j]) / t.r - 1.0);
  return lambda.dot(t.mu) + beta.dot(t.nu) - t.r * s;
}

Mat ot_plan(const TransportInstance& t, const Vec& lambda) {
  Mat X = Mat::Zero(t.C.rows(), t.C.cols());
  Vec p;
  for (int j = 0; j < t.C.cols(); ++j) {
    if (t.nu[j] == 0.0) continue;
    softmax_column(t.C, lambda, t.r, j, p);
    X.col(j) = t.nu[j] * p;
  }
  return X;
}

double ot_primal_value(const TransportInstance& t, const Mat& X) {
  double v = 0.0;
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) v += t.C(i, j) * X(i, j) + t.r * xlogx(X(i, j));
  return v;
}

OTResult entropic_ot(const TransportInstance& t, double tol, long max_rounds) {
  check_instance(t.C, t.mu, t.nu, t.r);
  if (t.mu.minCoeff() <= 0 || t.nu.minCoeff() <= 0) throw InputError("ot: marginals must be strictly positive");
  const int n = static_cast<int>(t.C.rows());
  FirstOrderOracle phi;
  phi.dim = n;
  phi.eval = [t](const Vec& l) {
    Vec g;
    double v = ot_conjugate(t.C, t.nu, t.r, l, &g);
    return Eval{v - l.dot(t.mu), g - t.mu};
  };
  phi.meta.L = 1.0 / t.r;
  auto gauge = [](Vec& l) { l.array() -= l.mean(); };
  RoundResult rr = accelerate_rounds(phi, Vec::Zero(n), 1.0 / t.r, tol, max_rounds, gauge);
  OTResult res;
  res.lambda = rr.x;
  res.value = ot_dual_value(t, res.lambda);
  res.plan = ot_plan(t, res.lambda);
  res.primal = ot_primal_value(t, res.plan);
  res.grad_norm = rr.gnorm;
  res.oracle_calls = rr.calls;
  res.report = finalize(std::move(rr.trace), res.lambda, tol);
  res.report.fval = res.value;
  res.report.oracle_calls = rr.calls;
  return res;
}

Mat sinkhorn(const TransportInstance& t, double tol, long max_iter) {
  check_instance(t.C, t.mu, t.nu, t.r);
  std::vector<int> rows, cols;
  for (int i = 0; i < t.mu.size(); ++i)
    if (t.mu[i] > 0) rows.push_back(i);
  for (int j = 0; j < t.nu.size(); ++j)
    if (t.nu[j] > 0) cols.push_back(j);
  const int p = static_cast<int>(rows.size()), q = static_cast<int>(cols.size());
  Mat K(p, q);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) K(a, b) = -t.C(rows[a], cols[b]) / t.r;
  Vec f = Vec::Zero(p), g = Vec::Zero(q), lmu(p), lnu(q);
  for (int a = 0; a < p; ++a) lmu[a] = std::log(t.mu[rows[a]]);
  for (int b = 0; b < q; ++b) lnu[b] = std::log(t.nu[cols[b]]);
  auto lse = [](const Vec& v) {
    const double top = v.maxCoeff();
    return top + std::log((v.array() - top).exp().sum());
  };
  Mat X(p, q);
  for (long it = 0; it < max_iter; ++it) {
    for (int a = 0; a < p; ++a) f[a] = lmu[a] - lse(K.row(a).transpose() + g);
    for (int b = 0; b < q; ++b) g[b] = lnu[b] - lse(K.col(b) + f);
    if (it % 10 == 9 || it + 1 == max_iter) {
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b) X(a, b) = std::exp(K(a, b) + f[a] + g[b]);
      double err = 0.0;
      for (int a = 0; a < p; ++a) err += std::abs(X.row(a).sum() - t.mu[rows[a]]);
      if (err <= tol) break;
    }
  }
  Mat full = Mat::Zero(t.C.rows(), t.C.cols());
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) full(rows[a], cols[b]) = std::exp(K(a, b) + f[a] + g[b]);
  return full;
}

double ot_exact_lp(const Mat& C, const Vec& mu, const Vec& nu) {
  check_instance(C, mu, nu, 1.0);
  const int n = static_cast<int>(C.rows()), m = static_cast<int>(C.cols());
  if (n * m > 16) throw InputError("ot_exact_lp: vertex enumeration is limited to 16 variables");
  // equality rows: row sums, then the first m-1 column sums (the last is implied)
  const int e = n + m - 1, vars = n * m;
  Mat E = Mat::Zero(e, vars);
  Vec rhs(e);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) E(i, i * m + j) = 1.0;
    rhs[i] = mu[i];
  }
  for (int j = 0; j + 1 < m; ++j) {
    for (int i = 0; i < n; ++i) E(n + j, i * m + j) = 1.0;
    rhs[n + j] = nu[j];
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(e);
  for (int i = 0; i < e; ++i) idx[i] = i;
  while (true) {
    Mat B(e, e);
    for (int k = 0; k < e; ++k) B.col(k) = E.col(idx[k]);
    Eigen::FullPivLU<Mat> lu(B);
    if (lu.rank() == e) {
      Vec xb = lu.solve(rhs);
      if (xb.minCoeff() >= -1e-12) {
        double v = 0.0;
        for (int k = 0; k < e; ++k) v += C(idx[k] / m, idx[k] % m) * xb[k];
        best = std::min(best, v);
      }
    }
    // next e-subset of {0..vars-1} in lexicographic order
    int k = e - 1;
    while (k >= 0 && idx[k] == vars - e + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int l = k + 1; l < e; ++l) idx[l] = idx[l - 1] + 1;
  }
  return best;
}

BarycenterResult barycenter(const std::vector<Vec>& nus, const Mat& C, double r, double eps, long max_rounds) {
  const int s = static_cast<int>(nus.size());
  if (s < 1) throw InputError("barycenter: need at least one measure");
  if (!(eps > 0)) throw InputError("barycenter: eps must be positive");
  const int n = static_cast<int>(C.rows());
  for (const Vec& v : nus) {
    check_instance(C, Vec::Constant(n, 1.0 / n), v, r);
    if (v.minCoeff() <= 0) throw InputError("barycenter: measures must be strictly positive");
  }
  BarycenterResult res;
  if (s == 1) {
    Vec g;
    double h = ot_conjugate(C, nus[0], r, Vec::Zero(n), &g);
    res.parts = {g};
    res.mu = g;
    res.objective = -h;
    Trace tr;
    tr.record({0, res.objective, 0.0, 0.0, 0.0, 1, 0});
    res.report = finalize(std::move(tr), g, eps);
    return res;
  }
  const int dim = n * (s - 1);
  auto split = [n, s](const Vec& L, std::vector<Vec>& lam) {
    lam.assign(s, Vec::Zero(n));
    for (int i = 0; i + 1 < s; ++i) {
      lam[i] = L.segment(i * n, n);
      lam[s - 1] -= lam[i];
    }
  };
  FirstOrderOracle phi;
  phi.dim = dim;
  phi.eval = [=](const Vec& L) {
    std::vector<Vec> lam;
    split(L, lam);
    Eval e{0.0, Vec(dim)};
    Vec gs;
    e.f = ot_conjugate(C, nus[s - 1], r, lam[s - 1], &gs);
    for (int i = 0; i + 1 < s; ++i) {
      Vec gi;
      e.f += ot_conjugate(C, nus[i], r, lam[i], &gi);
      e.g.segment(i * n, n) = gi - gs;
    }
    return e;
  };
  phi.meta.L = s / r;
  // grad_i = part_i - part_s, so |grad|_inf small means consistent parts; use the 2-norm
  // target eps / (2 sqrt(n)) to cover |part_i - mu|_1 <= eps
  const double tol = eps / (2.0 * std::sqrt(static_cast<double>(n)) * s);
  RoundResult rr = accelerate_rounds(phi, Vec::Zero(dim), s / r, tol, max_rounds, nullptr);
  std::vector<Vec> lam;
  split(rr.x, lam);
  res.mu = Vec::Zero(n);
  for (int i = 0; i < s; ++i) {
    Vec g;
    ot_conjugate(C, nus[i], r, lam[i], &g);
    res.parts.push_back(g);
    res.mu += g / s;
  }
  res.mu /= res.mu.sum();
  for (const Vec& p : res.parts) res.consistency = std::max(res.consistency, (p - res.mu).lpNorm<1>());
  res.objective = -phi.value(rr.x);
  res.report = finalize(std::move(rr.trace), res.mu, -1.0);
  res.report.fval = res.objective;
  res.report.oracle_calls = rr.calls;
  res.report.gap = res.consistency;
  res.report.status = res.consistency <= eps ? Status::Converged : Status::IterBudget;
  return res;
}

double barycenter_objective(const Vec& mu, const std::vector<Vec>& nus, const Mat& C, double r) {
  double v = 0.0;
  for (const Vec& nu : nus) {
    TransportInstance t{C, mu, nu, r};
    v += ot_primal_value(t, sinkhorn(t));
  }
  return v;
}

}  // namespace optikit
