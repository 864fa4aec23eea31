#include "optikit/frank_wolfe.hpp"

#include <cmath>
#include <limits>

namespace optikit {

Vec lmo_l1(const Vec& g, double r) {
  Eigen::Index i = 0;
  g.cwiseAbs().maxCoeff(&i);
  Vec y = Vec::Zero(g.size());
  y[i] = g[i] > 0 ? -r : r;
  return y;
}

Vec lmo_simplex(const Vec& g) {
  Eigen::Index i = 0;
  g.minCoeff(&i);
  Vec y = Vec::Zero(g.size());
  y[i] = 1.0;
  return y;
}

Vec lmo_box(const Vec& g, const Vec& lo, const Vec& hi) {
  Vec y(g.size());
  for (int i = 0; i < g.size(); ++i) y[i] = g[i] > 0 ? lo[i] : hi[i];
  return y;
}

namespace {
void check_g(const Vec& g, int n, const char* who) {
  if (g.size() != n) throw InputError(std::string(who) + ": gradient dimension");
  if (!g.allFinite()) throw DomainError(std::string(who) + ": non-finite gradient");
}
}  // namespace

LinearMinOracle l1_lmo(int n, double r) {
  if (!(r > 0)) throw InputError("l1 lmo: radius must be positive");
  LinearMinOracle o;
  o.name = "l1:" + std::to_string(r);
  o.solve = [n, r](const Vec& g) {
    check_g(g, n, "l1 lmo");
    Vertex v{lmo_l1(g, r), -1};
    for (int i = 0; i < n; ++i)
      if (v.y[i] != 0) v.id = 2L * i + (v.y[i] < 0 ? 1 : 0);
    return v;
  };
  o.contains = [n, r](const Vec& x) { return x.size() == n && x.lpNorm<1>() <= r * (1 + 1e-12); };
  return o;
}

LinearMinOracle simplex_lmo(int n) {
  LinearMinOracle o;
  o.name = "simplex";
  o.solve = [n](const Vec& g) {
    check_g(g, n, "simplex lmo");
    Eigen::Index i = 0;
    g.minCoeff(&i);
    return Vertex{lmo_simplex(g), static_cast<long>(i)};
  };
  o.contains = [n](const Vec& x) {
    return x.size() == n && x.minCoeff() >= -1e-12 && std::abs(x.sum() - 1.0) <= 1e-9;
  };
  return o;
}

LinearMinOracle box_lmo(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || (lo.array() > hi.array()).any()) throw InputError("box lmo: bad bounds");
  const int n = static_cast<int>(lo.size());
  LinearMinOracle o;
  o.name = "box";
  o.solve = [n, lo, hi](const Vec& g) {
    check_g(g, n, "box lmo");
    Vertex v{lmo_box(g, lo, hi), -1};
    if (n < 62) {
      long id = 0;
      for (int i = 0; i < n; ++i)
        if (g[i] > 0) id |= 1L << i;
      v.id = id;
    }
    return v;
  };
  o.contains = [n, lo, hi](const Vec& x) {
    if (x.size() != n) return false;
    for (int i = 0; i < n; ++i)
      if (x[i] < lo[i] - 1e-12 || x[i] > hi[i] + 1e-12) return false;
    return true;
  };
  return o;
}

LinearMinOracle zonotope_lmo(Mat U) {
  const int n = static_cast<int>(U.rows());
  const int m = static_cast<int>(U.cols());
  if (n == 0 || m == 0) throw InputError("zonotope lmo: empty generator set");
  LinearMinOracle o;
  o.name = "zonotope";
  o.solve = [n, m, U](const Vec& g) {
    check_g(g, n, "zonotope lmo");
    Vec c = U.transpose() * g;
    Vec t(m);
    long id = 0;
    for (int i = 0; i < m; ++i) {
      t[i] = c[i] > 0 ? -1.0 : 1.0;
      if (m < 62 && c[i] > 0) id |= 1L << i;
    }
    return Vertex{U * t, m < 62 ? id : -1};
  };
  o.contains = [n, m, U](const Vec& x) {
    if (x.size() != n) return false;
    // least-squares coefficients are a witness when U has full column rank
    Vec t = U.colPivHouseholderQr().solve(x);
    return (U * t - x).norm() <= 1e-9 * (1 + x.norm()) && t.cwiseAbs().maxCoeff() <= 1 + 1e-9;
  };
  return o;
}

LinearMinOracle make_lmo(const std::string& spec, int n) {
  if (spec == "simplex") return simplex_lmo(n);
  if (spec == "box") return box_lmo(Vec::Zero(n), Vec::Ones(n));
  if (spec.rfind("l1", 0) == 0) {
    double r = 1.0;
    if (spec.size() > 3 && spec[2] == ':') {
      try {
        r = std::stod(spec.substr(3));
      } catch (const std::exception&) {
        throw InputError("bad l1 radius in set spec: " + spec);
      }
    } else if (spec != "l1") {
      throw InputError("unknown set spec: " + spec);
    }
    return l1_lmo(n, r);
  }
  throw InputError("unknown set spec: " + spec);
}

double fw_gap(const Vec& x, const Vec& g, const LinearMinOracle& lmo) {
  return g.dot(x - lmo.solve(g).y);
}

double fw_bound(double L, double R, long k) {
  return 2.0 * L * R * R / (static_cast<double>(k) + 2.0);
}

static long count_nnz(const Vec& x) { return static_cast<long>((x.array() != 0.0).count()); }

Report frank_wolfe(const FirstOrderOracle& f, const LinearMinOracle& lmo, const Vec& x0,
                   const FWOptions& o, FWLog* log) {
  if (x0.size() != f.dim) throw InputError("frank_wolfe: x0 dimension");
  if (!lmo.contains(x0)) throw InputError("frank_wolfe: x0 is not in the feasible set");
  if (o.N < 0) throw InputError("frank_wolfe: N must be nonnegative");
  Vec x = x0;
  std::map<long, double> w;
  bool track = o.x0_id >= 0;
  if (track) w[o.x0_id] = 1.0;
  Trace tr;
  long calls = 0;
  bool converged = false;
  for (long k = 0; k <= o.N; ++k) {
    Eval e = f(x);
    ++calls;
    Vertex v = lmo.solve(e.g);
    if (!lmo.contains(v.y)) throw ProtocolError("frank_wolfe: LMO returned a point outside the set");
    double gap = e.g.dot(x - v.y);
    tr.record({k, e.f, gap, 0.0, 0.0, calls, 0});
    if (log) {
      log->vertex_ids.push_back(v.id);
      log->nnz.push_back(count_nnz(x));
      log->fval.push_back(e.f);
      log->gap.push_back(gap);
    }
    if ((o.eps > 0 && gap <= o.eps) || (o.stop && o.stop(x, e, gap))) {
      converged = true;
      break;
    }
    if (k == o.N) break;
    double gamma = 2.0 / (static_cast<double>(k) + 2.0);
    x = (1.0 - gamma) * x + gamma * v.y;
    if (track) {
      if (v.id < 0) {
        track = false;
        w.clear();
      } else {
        for (auto& [id, wt] : w) wt *= 1.0 - gamma;
        w[v.id] += gamma;
        for (auto it = w.begin(); it != w.end();)
          it = it->second == 0.0 ? w.erase(it) : std::next(it);
      }
    }
  }
  if (log) log->weights = w;
  Report r = finalize(std::move(tr), x, o.eps > 0 ? o.eps : -1.0);
  r.oracle_calls = calls;
  if (converged) r.status = Status::Converged;
  return r;
}

}  // namespace optikit
