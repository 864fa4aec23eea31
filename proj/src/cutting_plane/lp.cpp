#include "optikit/cutting_plane.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace optikit {

double lp_h(const LPInstance& lp) {
  double h = 0.0;
  if (lp.A.size()) h = std::max(h, lp.A.cwiseAbs().maxCoeff());
  if (lp.b.size()) h = std::max(h, lp.b.cwiseAbs().maxCoeff());
  if (lp.c.size()) h = std::max(h, lp.c.cwiseAbs().maxCoeff());
  return std::max(h, 1.0);
}

double hadamard_delta(const Mat& A) {
  // |det B| <= prod of row norms of B, and each row of B is part of a row of A.
  std::vector<double> norms;
  for (int i = 0; i < A.rows(); ++i) norms.push_back(std::max(1.0, A.row(i).norm()));
  std::sort(norms.begin(), norms.end(), std::greater<double>());
  double d = 1.0;
  int k = std::min<int>(static_cast<int>(A.cols()), static_cast<int>(norms.size()));
  for (int i = 0; i < k; ++i) d *= norms[i];
  return d;
}

double lp_default_radius(const LPInstance& lp) {
  double n = static_cast<double>(lp.A.cols());
  return lp_h(lp) * std::pow(n, 1.5) * hadamard_delta(lp.A);
}

static void check_instance(const LPInstance& lp) {
  if (lp.A.rows() == 0 || lp.A.cols() == 0) throw InputError("lp: empty constraint matrix");
  if (lp.b.size() != lp.A.rows()) throw InputError("lp: b has wrong length");
  if (lp.c.size() && lp.c.size() != lp.A.cols()) throw InputError("lp: c has wrong length");
  if (!lp.A.allFinite() || !lp.b.allFinite() || (lp.c.size() && !lp.c.allFinite()))
    throw InputError("lp: non-finite data");
}

FeasibilityResult lp_feasibility(const LPInstance& lp, double eps, EllipsoidLog* log) {
  check_instance(lp);
  if (!(eps > 0)) throw InputError("lp_feasibility: eps must be positive");
  const int n = static_cast<int>(lp.A.cols());
  const double R = lp.R > 0 ? lp.R : lp_default_radius(lp);
  FeasibilityResult res;
  double v = 2.0 * n * (n + 1) * std::log(R * std::sqrt(double(n)) * lp_h(lp) / eps);
  res.bound = std::max(1L, static_cast<long>(std::ceil(v)));

  // shape kept as H = B B^T; the factored update stays positive definite in floating point
  // when the level sets get thin
  Vec c = Vec::Zero(n);
  Mat B = Mat::Identity(n, n) * R;
  const double dn = n;
  const double alpha = n == 1 ? 0.5 : 1.0 - std::sqrt((dn - 1.0) / (dn + 1.0));
  const double scale = n == 1 ? 1.0 : dn / std::sqrt(dn * dn - 1.0);
  auto cut = [&](const Vec& g, double s) {
    Vec p = B.transpose() * g / s;
    c -= B * p / (dn + 1.0);
    B = scale * (B - alpha * (B * p) * p.transpose());
  };
  for (long k = 0; k <= res.bound; ++k) {
    if (log) {
      Mat H = B * B.transpose();
      log->centers.push_back(c);
      log->shapes.push_back(H);
      log->log_det.push_back(2.0 * std::log(std::abs(B.determinant())));
    }
    Vec viol = lp.A * c - lp.b;
    Eigen::Index worst = 0;
    double w = viol.maxCoeff(&worst);  // first index on ties
    res.iterations = k;
    if (w > eps) {
      const Vec g = lp.A.row(worst).transpose();
      const double s = (B.transpose() * g).norm();
      // min over the ellipsoid of <a, x> - b is w - s: the whole localizer violates row i
      if (!(s > 0) || w - s > eps) break;
      cut(g, s);
    } else if (c.norm() > R) {
      const double s = (B.transpose() * c).norm();
      if (!(s > 0)) break;
      cut(c, s);
    } else {
      res.feasible = true;
      res.x = c;
      res.max_violation = std::max(0.0, w);
      return res;
    }
  }
  res.x = c;
  return res;
}

double recovery_eps0(const Mat& A) {
  return 1.0 / ((static_cast<double>(A.cols()) + 2.0) * hadamard_delta(A));
}

namespace {

using QVec = std::vector<mpq_class>;

mpq_class dot_row(const std::vector<QVec>& A, int i, const QVec& x) {
  mpq_class s = 0;
  for (std::size_t j = 0; j < x.size(); ++j) s += A[i][j] * x[j];
  return s;
}

// Exact solution of A_I x = b_I; free variables take the values of `pref`.
QVec solve_active(const std::vector<QVec>& A, const QVec& b, const std::vector<int>& I,
                  const QVec& pref) {
  const std::size_t n = pref.size();
  std::vector<QVec> M;
  for (int i : I) {
    QVec row = A[i];
    row.push_back(b[i]);
    M.push_back(row);
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < M.size(); ++col) {
    std::size_t p = r;
    while (p < M.size() && M[p][col] == 0) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[r]);
    mpq_class inv = 1 / M[r][col];
    for (auto& v : M[r]) v *= inv;
    for (std::size_t q = 0; q < M.size(); ++q) {
      if (q == r || M[q][col] == 0) continue;
      mpq_class f = M[q][col];
      for (std::size_t j = 0; j <= n; ++j) M[q][j] -= f * M[r][j];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++r;
  }
  for (std::size_t q = r; q < M.size(); ++q)
    if (M[q][n] != 0) throw NumericalError("lp_exact_recovery: active equality system is inconsistent");
  QVec x = pref;
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (std::size_t q = 0; q < r; ++q) {
    mpq_class v = M[q][n];
    for (std::size_t j = 0; j < n; ++j)
      if (!is_pivot[j]) v -= M[q][j] * x[j];
    x[pivot_col[q]] = v;
  }
  return x;
}

// Nonzero d with A_I d = 0, or empty when the rows of I have rank n.
QVec null_direction(const std::vector<QVec>& A, const std::vector<int>& I, std::size_t n) {
  std::vector<QVec> M;
  for (int i : I) M.push_back(A[i]);
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < M.size(); ++col) {
    std::size_t p = r;
    while (p < M.size() && M[p][col] == 0) ++p;
    if (p == M.size()) continue;
    std::swap(M[p], M[r]);
    mpq_class inv = 1 / M[r][col];
    for (auto& v : M[r]) v *= inv;
    for (std::size_t q = 0; q < M.size(); ++q) {
      if (q == r || M[q][col] == 0) continue;
      mpq_class f = M[q][col];
      for (std::size_t j = 0; j < n; ++j) M[q][j] -= f * M[r][j];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++r;
  }
  if (r == n) return {};
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  QVec d(n);
  d[free_col] = 1;
  for (std::size_t q = 0; q < r; ++q) d[pivot_col[q]] = -M[q][free_col];
  return d;
}

}  // namespace

RecoveryResult lp_exact_recovery(const LPInstance& lp, const Vec& x_tilde, double eps0) {
  check_instance(lp);
  const int m = static_cast<int>(lp.A.rows()), n = static_cast<int>(lp.A.cols());
  if (x_tilde.size() != n) throw InputError("lp_exact_recovery: point dimension");
  if (!(eps0 > 0)) throw InputError("lp_exact_recovery: eps0 must be positive");
  std::vector<QVec> A(m, QVec(n));
  QVec b(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (lp.A(i, j) != std::round(lp.A(i, j))) throw InputError("lp_exact_recovery: A must be integral");
      A[i][j] = lp.A(i, j);
    }
    if (lp.b[i] != std::round(lp.b[i])) throw InputError("lp_exact_recovery: b must be integral");
    b[i] = lp.b[i];
  }
  QVec x(n);
  for (int j = 0; j < n; ++j) x[j] = x_tilde[j];  // exact dyadic value
  const mpq_class e0 = eps0;

  RecoveryResult res;
  std::vector<bool> forced(m, false);
  for (int round = 0; round <= m + 1; ++round) {
    QVec r(m);
    bool feasible = true;
    for (int i = 0; i < m; ++i) {
      r[i] = dot_row(A, i, x) - b[i];
      if (r[i] > e0) throw InputError("lp_exact_recovery: point is not eps0-feasible");
      if (r[i] > 0) feasible = false;
    }
    if (feasible) {
      res.unchanged = round == 0;
      res.rounds = round;
      break;
    }
    std::vector<int> I;
    for (int i = 0; i < m; ++i)
      if (forced[i] || abs(r[i]) <= e0) I.push_back(i);
    QVec xh = solve_active(A, b, I, x);
    int jmin = -1;
    mpq_class tmin;
    for (int j = 0; j < m; ++j) {
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      mpq_class ah = dot_row(A, j, xh);
      if (ah - b[j] > 0) {
        mpq_class t = -r[j] / (ah - dot_row(A, j, x));
        if (jmin < 0 || t < tmin) {
          jmin = j;
          tmin = t;
        }
      }
    }
    if (jmin < 0) {
      x = xh;
    } else {
      for (int k = 0; k < n; ++k) x[k] = (1 - tmin) * x[k] + tmin * xh[k];
      forced[jmin] = true;
    }
    if (round == m + 1) throw NumericalError("lp_exact_recovery: no progress");
  }
  // purification: move along the null space of the tight rows without lowering <c, x>
  // until n independent rows are tight; the result is a vertex
  if (lp.c.size()) {
    QVec c(n);
    for (int j = 0; j < n; ++j) c[j] = lp.c[j];  // exact dyadic value
    for (int step = 0; step <= n; ++step) {
      std::vector<int> tight;
      for (int i = 0; i < m; ++i)
        if (dot_row(A, i, x) == b[i]) tight.push_back(i);
      QVec d = null_direction(A, tight, static_cast<std::size_t>(n));
      if (d.empty()) break;
      mpq_class cd = 0;
      for (int j = 0; j < n; ++j) cd += c[j] * d[j];
      if (cd < 0)
        for (auto& v : d) v = -v;
      auto ratio = [&](const QVec& dir, mpq_class& t) {
        int jmin = -1;
        for (int i = 0; i < m; ++i) {
          mpq_class ad = dot_row(A, i, dir);
          if (ad > 0) {
            mpq_class ti = (b[i] - dot_row(A, i, x)) / ad;
            if (jmin < 0 || ti < t) {
              jmin = i;
              t = ti;
            }
          }
        }
        return jmin;
      };
      mpq_class t;
      int j = ratio(d, t);
      if (j < 0 && cd == 0) {
        for (auto& v : d) v = -v;
        j = ratio(d, t);
      }
      if (j < 0) break;  // recession direction: the feasible set has no vertex along d
      for (int k = 0; k < n; ++k) x[k] += t * d[k];
      ++res.purify_steps;
    }
  }
  res.x.resize(n);
  for (int j = 0; j < n; ++j) {
    x[j].canonicalize();
    res.x[j] = x[j].get_d();
    res.exact.push_back(x[j].get_str());
  }
  return res;
}

LPResult lp_solve(const LPInstance& lp, double eps) {
  check_instance(lp);
  if (!lp.c.size()) throw InputError("lp_solve: objective c is required");
  if (!(eps > 0)) throw InputError("lp_solve: eps must be positive");
  const int m = static_cast<int>(lp.A.rows()), n = static_cast<int>(lp.A.cols());
  LPInstance base = lp;
  base.R = lp.R > 0 ? lp.R : lp_default_radius(lp);

  bool integral = true;
  for (int i = 0; i < m; ++i) {
    if (lp.b[i] != std::round(lp.b[i])) integral = false;
    for (int j = 0; j < n; ++j)
      if (lp.A(i, j) != std::round(lp.A(i, j))) integral = false;
  }
  double tol = eps;
  if (integral) {
    double D = hadamard_delta(lp.A);
    double eps1 = 1.0 / (4.0 * std::pow(double(n), 2.5) * D * D * D * lp.c.norm());
    tol = std::min(eps, eps1);
  }

  LPResult out;
  FeasibilityResult f0 = lp_feasibility(base, tol);
  out.ellipsoid_steps += f0.iterations;
  if (!f0.feasible) {
    out.status = Status::Infeasible;
    out.x = f0.x;
    return out;
  }
  Vec best = f0.x;
  double t_lo = lp.c.dot(best);
  double t_hi = lp.c.norm() * base.R + 1.0;

  LPInstance level = base;
  level.A.conservativeResize(m + 1, n);
  level.A.row(m) = -lp.c.transpose();
  level.b.conservativeResize(m + 1);
  while (t_hi - t_lo > tol * (1.0 + std::abs(t_lo))) {
    double t = 0.5 * (t_lo + t_hi);
    if (t <= t_lo || t >= t_hi) break;  // below double resolution
    level.b[m] = -t;
    FeasibilityResult fr = lp_feasibility(level, tol);
    out.ellipsoid_steps += fr.iterations;
    ++out.levels;
    if (fr.feasible) {
      best = fr.x;
      t_lo = std::max(t, lp.c.dot(best));
    } else {
      t_hi = t;
    }
  }
  out.x = best;
  if (integral) {
    double e0 = recovery_eps0(lp.A);
    double viol = (lp.A * best - lp.b).maxCoeff();
    if (viol <= e0) {
      out.recovery = lp_exact_recovery(lp, best, e0);
      out.x = out.recovery->x;
    }
  }
  out.value = lp.c.dot(out.x);
  out.status = Status::Converged;
  return out;
}

LPInstance klee_minty(int n) {
  if (n < 1 || n > 10) throw InputError("klee_minty: n must be in [1, 10]");
  LPInstance lp;
  lp.A = Mat::Zero(2 * n, n);
  lp.b = Vec::Zero(2 * n);
  lp.c = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) lp.A(i, j) = std::ldexp(1.0, i - j + 1);
    lp.A(i, i) = 1.0;
    lp.b[i] = std::pow(5.0, i + 1);
    lp.c[i] = std::ldexp(1.0, n - 1 - i);
    lp.A(n + i, i) = -1.0;
  }
  Vec xs = Vec::Zero(n);
  xs[n - 1] = std::pow(5.0, n);
  lp.x_opt = xs;
  lp.value = xs[n - 1];
  return lp;
}

}  // namespace optikit
