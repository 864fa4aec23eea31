// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "optikit/apps.hpp"
#include "optikit/autodiff.hpp"
#include "optikit/cli.hpp"
#include "optikit/cutting_plane.hpp"
#include "optikit/frank_wolfe.hpp"
#include "optikit/gradient.hpp"
#include "optikit/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace optikit;

namespace {

// Everything a criterion computed, serialized; used by the determinism check.
struct Digest {
  std::string s;
  void add(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    s += buf;
  }
  void add(const Vec& v) {
    for (int i = 0; i < v.size(); ++i) add(v[i]);
  }
  void add(const Trace& t) { s += trace_csv(t, false); }
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects named sub-checks; the first failure is reported.
struct Checks {
  bool pass = true;
  std::string fail, info;
  void need(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      fail = what;
    }
  }
  Outcome done() const { return {pass, pass ? info : "failed: " + fail}; }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Mat gaussian(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  return A;
}
Vec gaussian(int n, std::mt19937_64& rng) { return gaussian(n, 1, rng).col(0); }

double slack(double b) { return 1e-12 * std::max(1.0, std::abs(b)); }

// --- 1: subgradient rate ------------------------------------------------------------
Outcome c1(Digest& d) {
  Checks c;
  std::mt19937_64 rng(11);
  Vec xs = gaussian(5, rng);
  FirstOrderOracle f = distance_oracle(xs);
  Vec x0 = xs + Vec::Unit(5, 0);
  double worst = 0.0;
  for (long N : {16L, 100L, 1024L}) {
    SubgradientOptions o;
    o.policy = StepPolicy::FixedR;
    o.R = 1.0;
    o.M = 1.0;
    o.N = N;
    Report r = subgradient_descent(f, x0, o);
    const double bound = 1.0 / std::sqrt(static_cast<double>(N));
    const double err = f.value(r.x);
    c.need(err <= bound + slack(bound), "f(avg) - f* > MR/sqrt(N) at N=" + std::to_string(N));
    c.need(r.gap <= bound + slack(bound), "certificate above MR/sqrt(N) at N=" + std::to_string(N));
    worst = std::max(worst, err / bound);
    d.add(r.trace);
    d.add(r.x);
  }
  c.info = fmt("max (f - f*) / (MR/sqrt N) = %.3f over N in {16,100,1024}", worst);
  return c.done();
}

// --- 2: switching subgradient ---------------------------------------------------------
Outcome c2(Digest& d) {
  Checks c;
  std::mt19937_64 rng(22);
  const int n = 4, m = 3;
  Vec cv = gaussian(n, rng);
  Mat A = gaussian(m, n, rng);
  Vec b = Vec::Constant(m, 0.2);
  std::vector<FirstOrderOracle> gl;
  double Mg = 0.0;
  for (int l = 0; l < m; ++l) {
    FirstOrderOracle g = linear_oracle(A.row(l).transpose());
    auto base = g.eval;
    const double bl = b[l];
    g.eval = [base, bl](const Vec& x) {
      Eval e = base(x);
      e.f -= bl;
      return e;
    };
    gl.push_back(g);
    Mg = std::max(Mg, A.row(l).norm());
  }
  std::string info;
  for (double eps : {0.1, 0.01}) {
    SwitchingOptions o;
    o.Mf = cv.norm();
    o.Mg = Mg;
    o.eps = eps;
    o.Q = FeasibleSet::ball(1.0);
    o.m = m;
    o.Rbar = std::sqrt(2.0);  // |x - y|^2 <= 4 on the unit ball
    o.dual = [&](const Vec& lam) { return -(cv + A.transpose() * lam).norm() - b.dot(lam); };
    SwitchingResult r = switching_subgradient(linear_oracle(cv), max_constraint(gl), Vec::Zero(n), o);
    const std::string at = " at eps=" + fmt("%g", eps);
    c.need(o.Q.contains(r.x_hat, 1e-12), "x_hat outside Q" + at);
    c.need(r.g_hat <= eps, "g(x_hat) > eps" + at);
    c.need(std::isfinite(r.gap) && r.gap <= eps, "f(x_hat) - phi(lambda) > eps" + at);
    c.need(r.gap_bound <= eps + slack(eps), "algebraic bound > eps" + at);
    c.need((r.lambda.array() >= 0).all(), "negative multiplier" + at);
    info += fmt("eps=%g: gap %.2e", eps, r.gap) + fmt(", g_hat %.2e; ", r.g_hat);
    d.add(r.x_hat);
    d.add(r.lambda);
    d.add(r.report.trace);
  }
  c.info = info + "N from the second count";
  return c.done();
}

// --- 3: ellipsoid ---------------------------------------------------------------------
Outcome c3(Digest& d) {
  Checks c;
  std::mt19937_64 rng(33);
  const int n = 5;
  Mat G = gaussian(n, n, rng);
  Mat Aq = G * G.transpose() + Mat::Identity(n, n);
  Vec xs = gaussian(n, rng);
  xs *= 0.5 / xs.norm();
  FirstOrderOracle f = quadratic_oracle(Aq, Aq * xs);
  const double R = 1.0, eps = 1e-6;
  const double fstar = f.value(xs);
  const double M = Aq.norm() * 2.0 * R;  // gradient bound on B(0, R) around x* inside it
  const long bound = ellipsoid_iteration_bound(n, M, R, eps);
  EllipsoidOptions o;
  o.R = R;
  o.eps = eps;
  o.max_iter = bound;
  o.stop_on_certificate = false;
  EllipsoidLog log;
  Report r = ellipsoid_minimize(f, [](const Vec&) -> std::optional<Vec> { return std::nullopt; },
                                Vec::Zero(n), o, &log);
  c.need(r.fval - fstar <= eps, "f_best - f* > eps after the iteration bound");
  c.need(r.oracle_calls <= bound, "more oracle calls than the bound");
  const double want = std::log(det_ratio(n));
  double dev = 0.0;
  for (std::size_t k = 1; k < log.log_det.size(); ++k)
    dev = std::max(dev, std::abs(log.log_det[k] - log.log_det[k - 1] - want));
  c.need(dev <= 1e-9, "per-step log det ratio deviates from the formula");
  d.add(r.trace);

  LPResult lp = lp_solve(klee_minty(3), 1e-6);
  c.need(lp.status == Status::Converged, "Klee-Minty n=3 did not converge");
  c.need(std::abs(lp.value - 125.0) <= 1e-4, "Klee-Minty n=3 value differs from 125");
  d.add(lp.x);
  c.info = fmt("n=5: f-f* = %.2e", r.fval - fstar) + fmt(" with %.0f of %.0f calls", r.oracle_calls, bound) +
           fmt(", max |dlogdet - log ratio| = %.1e", dev) + fmt(", Klee-Minty(3) value %.6f", lp.value);
  return c.done();
}

// --- 4: accelerated rate and A_N growth ---------------------------------------------------
Outcome c4(Digest& d) {
  Checks c;
  double worst = 0.0, worstA = std::numeric_limits<double>::infinity();
  EuclideanGeometry geo;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cli::Problem p = cli::generate_problem("gen:quadratic:20", seed);
    const double L = *p.L, fs = *p.fstar;
    const double R2 = 0.5 * (p.f.opt->x - p.x0).squaredNorm();
    for (bool adaptive : {false, true}) {
      ModelOptions o;
      o.L0 = adaptive ? 0.1 * L : L;
      o.adaptive = adaptive;
      o.N = 300;
      ModelLog log;
      Report r = adaptive_accelerated(gradient_model(p.f), geo, p.x0, o, &log);
      if (!adaptive) {
        for (const auto& row : r.trace.rows()) {
          const double k = static_cast<double>(row.iter);
          const double b = 8.0 * L * R2 / ((k + 1.0) * (k + 1.0));
          c.need(row.fval - fs <= b + slack(b), "rate bound violated at seed " + std::to_string(seed));
          if (row.iter > 0) worst = std::max(worst, (row.fval - fs) / b);
        }
      }
      double maxL = 0.0;
      for (std::size_t k = 0; k < log.A.size(); ++k) {
        maxL = std::max(maxL, log.L[k]);
        const double N = static_cast<double>(k + 1);
        const double lower = (N + 1.0) * (N + 1.0) / (8.0 * maxL);
        c.need(log.A[k] >= lower * (1.0 - 1e-12), "A_N below (N+1)^2/(8 max L)");
        worstA = std::min(worstA, log.A[k] / lower);
      }
      c.need(log.A.size() == 300, "ModelLog does not hold 300 steps");
      d.add(r.trace);
    }
  }
  c.info = fmt("5 seeds, N=300: max (f-f*)/bound = %.3f, min A_N/lower = %.3f", worst, worstA);
  return c.done();
}

// --- 5: adaptive test count ----------------------------------------------------------------
Outcome c5(Digest& d) {
  Checks c;
  std::vector<cli::Problem> probs;
  for (const auto& e : std::filesystem::directory_iterator(std::string(OPTIKIT_SOURCE_DIR) + "/problems"))
    if (e.path().extension() == ".json") probs.push_back(cli::load_problem(e.path().string()));
  for (std::uint64_t s = 1; s <= 3; ++s) {
    probs.push_back(cli::generate_problem("gen:quadratic:15", s));
    probs.push_back(cli::generate_problem("gen:lsq:20:10", s));
  }
  const long N = 200;
  double worst = 0.0;
  for (const auto& p : probs) {
    EuclideanGeometry geo(p.set);
    for (int method = 0; method < 2; ++method) {
      ModelOptions o;
      o.L0 = 1.0;
      o.N = N;
      ModelLog log;
      Report r = method == 0 ? adaptive_accelerated(gradient_model(p.f), geo, p.x0, o, &log)
                             : adaptive_model_gd(gradient_model(p.f), geo, p.x0, o, &log);
      c.need(log.tests <= 4 * N, std::string(method == 0 ? "accelerated" : "gd") + " used more than 4N tests on " + p.type);
      worst = std::max(worst, static_cast<double>(log.tests) / N);
      d.add(r.trace);
    }
  }
  c.info = fmt("%.0f problems x 2 methods, N=200: max tests/N = %.3f", static_cast<double>(probs.size()), worst);
  return c.done();
}

// --- 6: Frank-Wolfe ----------------------------------------------------------------------
Outcome c6(Digest& d) {
  Checks c;
  std::mt19937_64 rng(66);
  const int m = 20, n = 40;
  Mat A = gaussian(m, n, rng) / std::sqrt(static_cast<double>(m));
  Vec b = gaussian(m, rng);
  FirstOrderOracle f = least_squares_oracle(A, b);
  const double L = Eigen::SelfAdjointEigenSolver<Mat>(A.transpose() * A).eigenvalues().maxCoeff();
  const double R = 2.0;  // diameter of the unit l1 ball in the 2-norm
  LinearMinOracle lmo = l1_lmo(n, 1.0);
  Vec x0 = Vec::Unit(n, 0);

  FWOptions ref;
  ref.N = 20000;
  FWLog rlog;
  frank_wolfe(f, lmo, x0, ref, &rlog);
  double fstar_lo = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rlog.fval.size(); ++k) fstar_lo = std::max(fstar_lo, rlog.fval[k] - rlog.gap[k]);

  FWOptions o;
  o.N = 500;
  o.x0_id = 0;
  FWLog log;
  Report r = frank_wolfe(f, lmo, x0, o, &log);
  double worst = 0.0;
  for (std::size_t k = 1; k < log.fval.size(); ++k) {
    const double bnd = fw_bound(L, R, static_cast<long>(k));
    c.need(log.fval[k] - fstar_lo <= bnd + slack(bnd), "f_k - f* above 2LR^2/(k+2) at k=" + std::to_string(k));
    worst = std::max(worst, (log.fval[k] - fstar_lo) / bnd);
  }
  for (std::size_t k = 0; k < log.nnz.size(); ++k)
    c.need(log.nnz[k] <= static_cast<long>(k) + 1, "x_k has more than k+1 nonzeros");
  long wsupport = 0;
  Vec xw = Vec::Zero(n);
  for (const auto& [id, w] : log.weights) {
    if (w > 0) ++wsupport;
    xw += w * (id % 2 ? -1.0 : 1.0) * Vec::Unit(n, id / 2);
  }
  c.need((xw - r.x).norm() <= 1e-10, "vertex weights do not reproduce x_N");
  d.add(r.trace);

  // l1 signal approximation
  Mat S = gaussian(15, 30, rng);
  Vec Y = S * (Vec::Unit(30, 3) * 0.7 - Vec::Unit(30, 11) * 0.3) + 0.1 * gaussian(15, rng);
  SignalResult ref2 = l1_signal_approx(S, Y, 1.0, 0.0, 20000);
  double lo2 = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ref2.fvals.size(); ++k) lo2 = std::max(lo2, ref2.fvals[k] - ref2.gaps[k]);
  SignalResult sig = l1_signal_approx(S, Y, 1.0, 0.0, 500);
  double worst2 = 0.0;
  for (std::size_t k = 1; k < sig.fvals.size(); ++k) {
    const double bnd = 8.0 * sig.mhat * sig.mhat / (k + 2.0);
    c.need(sig.fvals[k] - lo2 <= bnd + slack(bnd), "signal approximation above 8 mhat^2/(k+2)");
    worst2 = std::max(worst2, (sig.fvals[k] - lo2) / bnd);
  }
  d.add(sig.x);
  c.info = fmt("l1 least squares: max ratio to bound %.3f", worst) + fmt(", final nnz %.0f", log.nnz.back()) +
           fmt("; signal: max ratio %.3f", worst2);
  return c.done();
}

// --- 7: universal method ----------------------------------------------------------------
Outcome c7(Digest& d) {
  Checks c;
  EuclideanGeometry geo;
  const double eps = 1e-3;
  FirstOrderOracle f = l1norm_oracle(1);
  UniversalOptions o;
  o.eps = eps;
  o.R = std::sqrt(0.5);  // sqrt V(x*, x0) with x0 = 1
  Report r = universal_solve(f, geo, Vec::Constant(1, 1.0), o);
  // |x| has sign(x) as gradient: Hoelder exponent 0 with constant 2
  const double count = universal_count(0.0, 2.0, o.R, eps);
  c.need(r.status == Status::Converged, "no convergence on |x|");
  c.need(static_cast<double>(r.iterations) <= count, "iterations above the nu=0 count on |x|");
  c.need(f.value(r.x) <= eps, "f(x) - f* > eps on |x|");
  d.add(r.trace);

  cli::Problem p = cli::generate_problem("gen:quadratic:10", 7);
  const double L = *p.L, fs = *p.fstar;
  UniversalOptions q;
  q.eps = 1e-6;
  q.R = (p.f.opt->x - p.x0).norm() / std::sqrt(2.0);
  Report rq = universal_solve(p.f, geo, p.x0, q);
  double worst = 0.0;
  for (const auto& row : rq.trace.rows()) {
    if (row.iter < 1) continue;
    const double k = static_cast<double>(row.iter);
    const double bnd = 64.0 * L * q.R * q.R / (k * k) + 0.5 * q.eps;
    c.need(row.fval - fs <= bnd + slack(bnd), "smooth rate violated at k=" + std::to_string(row.iter));
    worst = std::max(worst, (row.fval - fs) / bnd);
  }
  c.need(rq.status == Status::Converged, "no convergence on the quadratic");
  d.add(rq.trace);
  c.info = fmt("|x|: %.0f iterations vs count %.0f", r.iterations, count) +
           fmt("; quadratic: %.0f iterations, max ratio to smooth bound %.3f", rq.iterations, worst);
  return c.done();
}

// --- 8: restarts ------------------------------------------------------------------------
Outcome c8(Digest& d) {
  Checks c;
  cli::Problem p = cli::generate_problem("gen:quadratic:10", 3);
  EuclideanGeometry geo;
  RestartOptions o;
  o.mu = *p.mu;
  o.L = *p.L;
  o.R = *p.R;
  o.eps = o.mu * o.R * o.R / std::ldexp(1.0, 12);
  RestartLog log;
  Report r = restart_strongly_convex(gradient_model(p.f), geo, p.x0, o, &log);
  c.need(log.stage_gap.size() >= 12, "fewer than 12 stages");
  double worst = 0.0;
  for (std::size_t k = 1; k <= log.stage_gap.size(); ++k) {
    const double b = o.mu * o.R * o.R / std::ldexp(1.0, static_cast<int>(k) + 1);
    c.need(log.stage_gap[k - 1] <= b + slack(b), "stage " + std::to_string(k) + " gap above mu R^2/2^(k+1)");
    worst = std::max(worst, log.stage_gap[k - 1] / b);
  }
  const double count = static_cast<double>(restart_total_count(o.L, geo.omega(), o.mu, o.R, o.eps));
  const double ratio = static_cast<double>(r.oracle_calls) / count;
  c.need(ratio >= 0.5 && ratio <= 2.0, "oracle calls not within a factor 2 of the count");
  d.add(r.trace);
  c.info = fmt("%.0f stages, max gap/bound %.3f", static_cast<double>(log.stage_gap.size()), worst) +
           fmt(", calls/count = %.3f", ratio);
  return c.done();
}

// --- 9: noise accumulation -----------------------------------------------------------------
Outcome c9(Digest& d) {
  Checks c;
  const int n = 10;
  const double mu = 1e-2, L = 1.0, delta = 1e-3;
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam[i] = mu * std::pow(L / mu, i / (n - 1.0));
  FirstOrderOracle f = quadratic_oracle(lam.asDiagonal().toDenseMatrix(), Vec::Zero(n));
  NoiseRule rule;
  rule.offset = -Vec::Unit(n, 0);  // the first partial reads mu x^1 - delta
  FirstOrderOracle noisy = perturb_oracle(f, delta, 0.0, rule);
  const Vec x0 = Vec::Constant(n, 1.0);
  const long N = 20000;
  Report gd = gd_fixed(noisy, L, x0, N);
  ModelOptions o;
  o.L0 = L;
  o.adaptive = false;
  o.N = N;
  Report agd = adaptive_accelerated(gradient_model(noisy), EuclideanGeometry(), x0, o);
  const double egd = f.value(gd.x), eagd = f.value(agd.x);
  const double plateau = delta * delta / (2.0 * mu);
  c.need(egd >= 0.5 * plateau, "GD error below half the plateau");
  c.need(eagd > egd, "accelerated final error does not exceed GD's");
  d.add(gd.x);
  d.add(agd.x);
  c.info = fmt("GD error %.6e", egd) + fmt(" (plateau %.3e)", plateau) + fmt(", accelerated %.6e", eagd);
  return c.done();
}

// --- 10: D-optimal design --------------------------------------------------------------------
Outcome c10(Digest& d) {
  Checks c;
  std::mt19937_64 rng(1010);
  const int m = 3, n = 8;
  Mat H = gaussian(m, n, rng);
  const double eps = 1e-2;
  DoptOptions o;
  o.eps = eps;
  Report r = dopt_design(H, o);
  const double fref = dopt_value(H, dopt_multiplicative(H, 200000));
  const Vec xu = Vec::Constant(n, 1.0 / n);
  const long N = dopt_iterations(n, dopt_audit(H, xu) - m, eps);
  c.need(r.iterations <= N, "more iterations than the count for the default initial gap");
  const Vec& x = r.x;
  const double sum = x.sum();
  c.need((x.array() >= 0).all(), "negative design weight");
  c.need(std::abs(sum - 1.0) <= 8.0 * n * std::numeric_limits<double>::epsilon(), "weights do not sum to 1");
  c.need(dopt_value(H, x) - fref <= eps, "F(x_N) - F* > eps");
  c.need(r.gap <= eps, "certificate above eps");
  const double audit = dopt_audit(H, x);
  c.need(audit <= m * (1.0 + eps), "audit max h^T M^-1 h above m(1+eps)");
  d.add(r.trace);
  c.info = fmt("%.0f iterations, F - F* = %.2e", r.iterations, dopt_value(H, x) - fref) +
           fmt(", audit %.5f, |sum-1| = %.1e", audit, std::abs(sum - 1.0));
  return c.done();
}

// --- 11: entropic transport and barycenters --------------------------------------------------
Outcome c11(Digest& d) {
  Checks c;
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> ud(0.1, 1.0);
  auto measure = [&](int k) {
    Vec v(k);
    for (int i = 0; i < k; ++i) v[i] = ud(rng);
    return Vec(v / v.sum());
  };
  Mat C(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) C(i, j) = (i - j) * (i - j);
  double worst = 0.0;
  for (int inst = 0; inst < 5; ++inst) {
    for (double r : {1.0, 0.1}) {
      TransportInstance t{C, measure(3), measure(3), r};
      OTResult res = entropic_ot(t);
      const double sk = ot_primal_value(t, sinkhorn(t));
      worst = std::max(worst, std::abs(res.value - sk));
      c.need(std::abs(res.value - sk) <= 1e-8, "dual value differs from Sinkhorn by more than 1e-8");
      d.add(res.value);
    }
  }
  TransportInstance t{C, Vec(3), Vec(3), 1.0};
  t.mu << 0.5, 0.3, 0.2;
  t.nu << 0.2, 0.2, 0.6;
  const double lp = ot_exact_lp(C, t.mu, t.nu);
  double prev = std::numeric_limits<double>::infinity();
  std::string seq;
  for (double r : {1.0, 0.1, 0.01}) {
    t.r = r;
    const double dist = std::abs(entropic_ot(t).value - lp);
    c.need(dist < prev, "distance to the LP value does not shrink with r");
    prev = dist;
    seq += fmt(" %.3e", dist);
  }

  std::vector<Vec> nus{measure(3), measure(3), measure(3)};
  const double rb = 0.5;
  BarycenterResult bc = barycenter(nus, C, rb, 1e-9);
  auto F = [&](double a, double b) {
    Vec mu(3);
    mu << a, b, 1.0 - a - b;
    return barycenter_objective(mu, nus, C, rb);
  };
  double best = std::numeric_limits<double>::infinity(), ba = 0, bb = 0;
  for (double h : {0.02, 1e-3}) {
    const double ca = ba, cb = bb;
    const int span = h == 0.02 ? 50 : 30;
    for (int i = -span; i <= span; ++i)
      for (int j = -span; j <= span; ++j) {
        double a = h == 0.02 ? (i + span) * h : ca + i * h, b = h == 0.02 ? (j + span) * h : cb + j * h;
        if (a < 1e-3 || b < 1e-3 || 1.0 - a - b < 1e-3) continue;
        const double v = F(a, b);
        if (v < best) best = v, ba = a, bb = b;
      }
  }
  const double fb = barycenter_objective(bc.mu, nus, C, rb);
  c.need(std::abs(fb - best) <= 1e-4, "barycenter objective differs from the grid minimum");
  c.need(bc.consistency <= 1e-6, "recovered measures disagree");
  d.add(bc.mu);
  c.info = fmt("max |dual - Sinkhorn| = %.1e", worst) + "; |value - LP| for r=1,0.1,0.01:" + seq +
           fmt("; barycenter %.8f vs grid %.8f", fb, best);
  return c.done();
}

// LP max <f, y> s.t. |<a_i, y>| <= 1 by enumerating bases of the 2m constraint rows.
double truss_lp_value(const TrussInstance& t) {
  const int dn = t.dofs, m = static_cast<int>(t.a.size());
  Mat A = Mat::Zero(m, dn);
  for (int i = 0; i < m; ++i)
    for (auto [j, v] : t.a[i]) A(i, j) = v;
  Mat G(2 * m, dn);
  G << A, -A;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(dn);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == dn) {
      Mat B(dn, dn);
      for (int k = 0; k < dn; ++k) B.row(k) = G.row(idx[k]);
      Eigen::FullPivLU<Mat> lu(B);
      if (lu.rank() < dn) return;
      Vec y = lu.solve(Vec::Ones(dn));
      if (((G * y).array() <= 1.0 + 1e-9).all()) best = std::max(best, t.f.dot(y));
      return;
    }
    for (int r = start; r < 2 * m; ++r) {
      idx[pos] = r;
      rec(pos + 1, r + 1);
    }
  };
  rec(0, 0);
  return best;
}

// --- 12: truss topology and the max tree ------------------------------------------------------
Outcome c12(Digest& d) {
  Checks c;
  TrussInstance two = truss_two_bar();
  TrussOptions o;
  o.eps = 1e-3;
  TrussResult r = truss_solve(two, o);
  const double v = truss_lp_value(two);
  const double cstar = v * v / two.M;
  c.need(r.report.status == Status::Converged, "two-bar truss did not converge");
  c.need(std::abs(r.compliance - cstar) <= o.eps * cstar, "two-bar compliance differs from the LP optimum");
  c.need(std::abs(r.m.sum() - two.M) <= 1e-9 * two.M && (r.m.array() >= 0).all(), "masses infeasible");
  d.add(r.m);

  TrussInstance grid = truss_grid(5, 4);
  TrussOptions og;
  og.eps = 0.05;
  TrussResult rg = truss_solve(grid, og);
  c.need(rg.report.status == Status::Converged, "grid truss did not converge");
  c.need(rg.gap <= og.eps && rg.violation <= og.eps, "grid truss certificate above eps");
  c.need(rg.max_writes <= rg.tree_height, "grid max-tree writes above the height");
  d.add(rg.m);

  const long dl = 1L << 16;
  MaxTree tree(2 * dl);
  std::vector<double> shadow(2 * dl, 0.0);
  std::multiset<double> vals(shadow.begin(), shadow.end());
  std::mt19937_64 rng(1212);
  std::uniform_int_distribution<long> pick(0, 2 * dl - 1);
  std::normal_distribution<double> nd;
  const int cap = static_cast<int>(std::ceil(std::log2(2.0 * dl)));
  int maxw = 0;
  bool agree = true;
  for (int it = 0; it < 100000; ++it) {
    const long i = pick(rng);
    const double val = nd(rng);
    vals.erase(vals.find(shadow[i]));
    shadow[i] = val;
    vals.insert(val);
    maxw = std::max(maxw, tree.update(i, val));
    const double top = *vals.rbegin();
    if (tree.max() != top || shadow[tree.argmax()] != top) agree = false;
  }
  c.need(agree, "max tree disagrees with the shadow array");
  c.need(maxw <= cap, "more than ceil log2(2d) writes in one update");
  c.info = fmt("two-bar compliance %.7f vs LP %.7f", r.compliance, cstar) +
           fmt("; grid gap %.3e, violation %.1e", rg.gap, rg.violation) +
           fmt("; max tree: %.0f writes max, cap %.0f", maxw, cap);
  return c.done();
}

// --- 13: automatic differentiation ---------------------------------------------------------
Outcome c13(Digest& d) {
  Checks c;
  std::mt19937_64 rng(1313);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  double worst_fd = 0.0, worst_fw = 0.0, worst_ops = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 6;
    CompGraph g = random_graph(n, 40 + k, 5000 + k);
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = ud(rng);
    OpCount ops;
    auto [val, grad] = g.reverse(x, &ops);
    Vec fd(n), fw(n);
    for (int i = 0; i < n; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (g.evaluate(xp) - g.evaluate(xm)) / (2.0 * h);
      fw[i] = g.forward(x, Vec::Unit(n, i)).second;
    }
    const double scale = std::max(grad.norm(), 1.0);
    worst_fd = std::max(worst_fd, (grad - fd).norm() / scale);
    worst_fw = std::max(worst_fw, (grad - fw).norm() / scale);
    worst_ops = std::max(worst_ops, static_cast<double>(ops.backward) / ops.forward);
    c.need(std::abs(val - g.evaluate(x)) == 0.0, "reverse value differs from evaluate");
    d.add(grad);
  }
  c.need(worst_fd <= 1e-6, "reverse gradient differs from central differences");
  c.need(worst_fw <= 1e-12, "reverse and forward gradients disagree");
  c.need(worst_ops <= 5.0, "backward sweep costs more than 5x the forward pass");
  c.info = fmt("100 graphs: max rel FD err %.2e", worst_fd) + fmt(", reverse vs forward %.1e", worst_fw) +
           fmt(", max backward/forward ops %.2f", worst_ops);
  return c.done();
}

using Criterion = std::function<Outcome(Digest&)>;

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> crit{
      {"subgradient rate", c1},        {"switching subgradient", c2}, {"ellipsoid", c3},
      {"accelerated rate", c4},        {"adaptive test count", c5},   {"Frank-Wolfe", c6},
      {"universal method", c7},        {"restarts", c8},              {"noise accumulation", c9},
      {"D-optimal design", c10},       {"entropic transport", c11},   {"truss and max tree", c12},
      {"automatic differentiation", c13}};
  int failed = 0;
  std::vector<std::string> first;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    Digest dg;
    Outcome o;
    try {
      o = crit[i].second(dg);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    first.push_back(dg.s);
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, crit[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  // 14: a second run must reproduce every digest byte for byte
  long differ = -1;
  for (std::size_t i = 0; i < crit.size() && differ < 0; ++i) {
    Digest dg;
    try {
      crit[i].second(dg);
    } catch (const std::exception&) {
    }
    if (dg.s != first[i]) differ = static_cast<long>(i) + 1;
  }
  std::size_t bytes = 0;
  for (const auto& s : first) bytes += s.size();
  if (differ < 0)
    std::printf("PASS 14 determinism: criteria 1-13 reproduce %zu digest bytes\n", bytes);
  else
    std::printf("FAIL 14 determinism: criterion %ld differs between runs\n", differ), ++failed;
  return failed == 0 ? 0 : 1;
}
