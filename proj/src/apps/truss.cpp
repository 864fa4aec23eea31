#include "optikit/apps.hpp"
#include "optikit/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace optikit {

TrussInstance truss_from_layout(const Mat& nodes, const std::vector<std::array<int, 2>>& bars,
                                const std::vector<int>& fixed, const Vec& load, double M) {
  const int k = static_cast<int>(nodes.rows());
  if (nodes.cols() != 2) throw InputError("truss: planar layouts only");
  if (load.size() != 2 * k) throw InputError("truss: load must have two entries per node");
  if (!(M > 0)) throw InputError("truss: total mass must be positive");
  std::vector<int> dof(2 * k, -1);
  std::vector<bool> is_fixed(k, false);
  for (int v : fixed) {
    if (v < 0 || v >= k) throw InputError("truss: fixed node out of range");
    is_fixed[v] = true;
  }
  TrussInstance t;
  for (int v = 0; v < k; ++v)
    if (!is_fixed[v]) {
      dof[2 * v] = t.dofs++;
      dof[2 * v + 1] = t.dofs++;
    }
  t.f = Vec::Zero(t.dofs);
  for (int i = 0; i < 2 * k; ++i)
    if (dof[i] >= 0)
      t.f[dof[i]] = load[i];
  t.M = M;
  t.nodes = nodes;
  for (const auto& b : bars) {
    const int p = b[0], q = b[1];
    if (p < 0 || q < 0 || p >= k || q >= k || p == q) throw InputError("truss: bad bar endpoints");
    if (is_fixed[p] && is_fixed[q]) continue;
    Eigen::Vector2d dvec = nodes.row(q).transpose() - nodes.row(p).transpose();
    const double len = dvec.norm();
    if (!(len > 0)) throw InputError("truss: zero-length bar");
    Eigen::Vector2d u = dvec / len;
    SparseVec a;
    for (int c = 0; c < 2; ++c) {
      if (u[c] == 0.0) continue;
      if (dof[2 * p + c] >= 0) a.emplace_back(dof[2 * p + c], -u[c] / len);
      if (dof[2 * q + c] >= 0) a.emplace_back(dof[2 * q + c], u[c] / len);
    }
    std::sort(a.begin(), a.end());
    t.a.push_back(std::move(a));
    t.bars.push_back(b);
  }
  return t;
}

TrussInstance truss_two_bar() {
  Mat nodes(3, 2);
  nodes << 0, 0, 0, 1, 1, 0;
  Vec load = Vec::Zero(6);
  load[5] = -1.0;
  return truss_from_layout(nodes, {{0, 2}, {1, 2}}, {0, 1}, load, 1.0);
}

TrussInstance truss_grid(int cols, int rows) {
  if (cols < 2 || rows < 2) throw InputError("truss grid: need at least 2 x 2 nodes");
  auto id = [rows](int c, int r) { return c * rows + r; };
  Mat nodes(cols * rows, 2);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) nodes.row(id(c, r)) << c, r;
  std::vector<std::array<int, 2>> bars;
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      if (c + 1 < cols) bars.push_back({id(c, r), id(c + 1, r)});
      if (r + 1 < rows) bars.push_back({id(c, r), id(c, r + 1)});
      if (c + 1 < cols && r + 1 < rows) {
        bars.push_back({id(c, r), id(c + 1, r + 1)});
        bars.push_back({id(c, r + 1), id(c + 1, r)});
      }
    }
  std::vector<int> fixed;
  for (int r = 0; r < rows; ++r) fixed.push_back(id(0, r));
  Vec load = Vec::Zero(2 * cols * rows);
  load[2 * id(cols - 1, 0) + 1] = -1.0;
  return truss_from_layout(nodes, bars, fixed, load, 1.0);
}

static Mat dense_rows(const TrussInstance& t) {
  Mat A = Mat::Zero(static_cast<Eigen::Index>(t.a.size()), t.dofs);
  for (std::size_t j = 0; j < t.a.size(); ++j)
    for (auto [c, v] : t.a[j]) {
      if (c < 0 || c >= t.dofs) throw InputError("truss: interaction index out of range");
      A(static_cast<Eigen::Index>(j), c) = v;
    }
  return A;
}

static double min_eigen_ratio(const Mat& A, double* lmin) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  *lmin = ev[0];
  return ev[ev.size() - 1] > 0 ? ev[0] / ev[ev.size() - 1] : 0.0;
}

void truss_check_rigid(const TrussInstance& t) {
  if (t.dofs < 1 || t.a.empty()) throw InputError("truss: empty instance");
  if (t.f.size() != t.dofs) throw InputError("truss: load dimension");
  double lmin = 0;
  if (min_eigen_ratio(dense_rows(t), &lmin) <= 1e-12)
    throw ModelMismatch("truss: the structure is a mechanism (A(e) is singular); the dual problem is unbounded");
}

TrussResult truss_solve(const TrussInstance& t, const TrussOptions& o) {
  truss_check_rigid(t);
  if (!(o.eps > 0)) throw InputError("truss: eps must be positive");
  const int n = t.dofs;
  const int d = static_cast<int>(t.a.size());
  const Mat Ad = dense_rows(t);

  double Mg = 0.0;
  for (int j = 0; j < d; ++j) Mg = std::max(Mg, Ad.row(j).norm());
  const double Mf = t.f.norm();
  if (!(Mf > 0)) throw InputError("truss: zero load");
  double lmin = 0;
  min_eigen_ratio(Ad, &lmin);
  // every y with |<a_i, y>| <= 1 has |y|_2 <= sqrt(d) / sigma_min(A)
  const double B = o.B > 0 ? o.B : std::sqrt(static_cast<double>(d) / lmin);
  const double Rbar = B * std::sqrt(2.0 * n);  // |y - y'|^2 <= 4 n B^2 = 2 Rbar^2 on the box
  const long N = o.N > 0 ? o.N : switching_iterations_second(Mf, Mg, Rbar, o.eps);
  const double hf = o.eps / (Mf * Mf), hg = o.eps / (Mg * Mg);

  std::vector<std::vector<int>> incident(n);
  for (int j = 0; j < d; ++j)
    for (auto [c, v] : t.a[j]) incident[c].push_back(j);
  SparseVec fs;
  for (int c = 0; c < n; ++c)
    if (t.f[c] != 0.0) fs.emplace_back(c, t.f[c]);

  TrussResult res;
  res.B = B;
  MaxTree tree(2L * d);
  res.tree_height = tree.height();
  Vec y = Vec::Zero(n), acc = Vec::Zero(n);
  std::vector<long> stamp(n, 0), count(2 * d, 0), bar_seen(d, -1);
  std::vector<int> touched;
  long P = 0;
  Trace tr;

  auto certificate = [&](long k) {
    if (P == 0) return false;
    Vec yh(n);
    for (int c = 0; c < n; ++c) yh[c] = (acc[c] + y[c] * static_cast<double>(P - stamp[c])) / static_cast<double>(P);
    Vec mu(2 * d);
    for (int i = 0; i < 2 * d; ++i) mu[i] = hg * static_cast<double>(count[i]) / (hf * static_cast<double>(P));
    Vec r = t.f;
    double viol = 0.0;
    for (int j = 0; j < d; ++j) {
      double dot = 0.0;
      for (auto [c, v] : t.a[j]) {
        r[c] -= v * (mu[2 * j] - mu[2 * j + 1]);
        dot += v * yh[c];
      }
      viol = std::max(viol, std::abs(dot) - 1.0);
    }
    res.y = yh;
    res.primal = t.f.dot(yh);
    res.dual = mu.sum() + B * r.lpNorm<1>();
    res.gap = res.dual - res.primal;
    res.violation = std::max(0.0, viol);
    res.lambda.resize(d);
    for (int j = 0; j < d; ++j) res.lambda[j] = mu[2 * j] + mu[2 * j + 1];
    tr.record({k, res.primal, res.gap, res.violation, 0.0, k + 1 + P, 0});
    return res.gap <= o.eps && res.violation <= o.eps;
  };

  auto move = [&](int c, double delta) {
    acc[c] += y[c] * static_cast<double>(P - stamp[c]);
    stamp[c] = P;
    y[c] = std::clamp(y[c] + delta, -B, B);
    touched.push_back(c);
  };

  long k = 0;
  bool done = false;
  for (; k < N && !done; ++k) {
    const double g = tree.max() - 1.0;
    touched.clear();
    if (g <= o.eps) {
      ++P;  // the current y enters the average
      ++res.productive;
      for (auto [c, v] : fs) move(c, hf * v);
    } else {
      const long leaf = tree.argmax();
      const int j = static_cast<int>(leaf / 2);
      const double s = leaf % 2 == 0 ? 1.0 : -1.0;
      ++count[leaf];
      ++res.nonproductive;
      for (auto [c, v] : t.a[j]) move(c, -hg * s * v);
    }
    for (int c : touched)
      for (int j : incident[c]) {
        if (bar_seen[j] == k) continue;
        bar_seen[j] = k;
        double dot = 0.0;
        for (auto [cc, v] : t.a[j]) dot += v * y[cc];
        res.max_writes = std::max(res.max_writes, tree.update(2L * j, dot));
        res.max_writes = std::max(res.max_writes, tree.update(2L * j + 1, -dot));
      }
    if (o.check_every > 0 && (k + 1) % o.check_every == 0) {
      bool ok = certificate(k);
      if (ok && o.stop_on_certificate) done = true;
    }
  }
  const bool have = certificate(k > 0 ? k - 1 : 0);

  Report rep;
  if (P == 0 || res.nonproductive == 0) {
    rep = finalize(std::move(tr), y, -1.0);
    rep.status = Status::Error;
    rep.message = "truss: no productive or no constraint steps within the budget";
    res.report = std::move(rep);
    return res;
  }
  const double total = res.lambda.sum();
  res.m = t.M * res.lambda / total;
  Mat K = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j) K += res.m[j] * Ad.row(j).transpose() * Ad.row(j);
  res.x = K.completeOrthogonalDecomposition().solve(t.f);
  res.residual = (K * res.x - t.f).norm();
  res.compliance = t.f.dot(res.x);

  rep = finalize(std::move(tr), res.y, o.eps);
  rep.iterations = k;
  rep.oracle_calls = k + P;
  rep.fval = res.primal;
  rep.gap = res.gap;
  rep.status = have ? Status::Converged : Status::IterBudget;
  res.report = std::move(rep);
  return res;
}

}  // namespace optikit
