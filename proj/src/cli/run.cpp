#include "optikit/cli.hpp"
#include "optikit/cutting_plane.hpp"
#include "optikit/frank_wolfe.hpp"
#include "optikit/subgradient.hpp"

#include <cmath>
#include <limits>

namespace optikit::cli {

int exit_code(Status s) {
  switch (s) {
    case Status::Converged: return kExitConverged;
    case Status::IterBudget: return kExitBudget;
    default: return kExitFailure;
  }
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"subgrad", "switching", "ellipsoid", "gd",          "cheb",
                                              "hb",      "cg",        "agd",       "agd-adaptive", "universal",
                                              "restart", "meta",      "fw"};
  return names;
}

namespace {

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw InputError(std::string("run: this method needs ") + what);
  return *v;
}

const QuadraticProblem& need_quad(const Problem& p, const std::string& m) {
  if (!p.quad) throw InputError("run: method " + m + " needs a positive definite quadratic problem");
  return *p.quad;
}

SeparationOracle set_separation(const FeasibleSet& s) {
  switch (s.kind) {
    case SetKind::Whole:
      return [](const Vec&) -> std::optional<Vec> { return std::nullopt; };
    case SetKind::Ball:
      return [s](const Vec& x) -> std::optional<Vec> {
        Vec d = s.center.size() ? Vec(x - s.center) : x;
        if (d.norm() <= s.radius) return std::nullopt;
        return d;
      };
    case SetKind::L1Ball:
      return [s](const Vec& x) -> std::optional<Vec> {
        if (x.lpNorm<1>() <= s.radius) return std::nullopt;
        return Vec(x.array().sign().matrix());
      };
    case SetKind::Box:
      return [s](const Vec& x) -> std::optional<Vec> {
        for (int i = 0; i < x.size(); ++i) {
          if (x[i] > s.hi[i]) return Vec(Vec::Unit(x.size(), i));
          if (x[i] < s.lo[i]) return Vec(-Vec::Unit(x.size(), i));
        }
        return std::nullopt;
      };
    case SetKind::Simplex:
      break;
  }
  throw InputError("run: the ellipsoid method needs a set with nonempty interior");
}

}  // namespace

RunOutcome run_method(const RunConfig& c, const Problem& p) {
  const std::string& m = c.method;
  const int n = p.f.dim;
  const bool fixed_N = c.N.has_value();
  if (fixed_N && *c.N < 1) throw InputError("run: N must be positive");
  if (c.eps && !(*c.eps > 0)) throw InputError("run: eps must be positive");
  const double eps = c.eps.value_or(1e-6);
  FeasibleSet set = c.set.empty() ? p.set : parse_set(c.set, n);
  const std::string set_spec = c.set.empty() ? p.set_spec : c.set;
  std::unique_ptr<Geometry> geo = make_geometry(c.geometry, n, set);
  Vec x0 = p.x0;
  if (c.geometry != "euclid" && !geo->set().contains(x0, 1e-12)) x0 = geo->start_point(n);
  auto L_of = [&]() { return c.L0 ? *c.L0 : need(p.L, "L (problem field or --L0)"); };
  auto R_of = [&]() {
    if (p.R) return *p.R;
    if (p.f.opt && p.f.opt->x.size() == n) return std::max((x0 - p.f.opt->x).norm(), 1e-12);
    return 1.0;
  };

  Report r;
  if (m == "subgrad") {
    SubgradientOptions o;
    o.policy = parse_policy(c.policy);
    o.R = R_of();
    o.M = need(p.M, "M");
    o.eps = c.eps.value_or(0.1);
    o.N = c.N.value_or(0);
    o.Q = set;
    r = subgradient_descent(p.f, x0, o);
  } else if (m == "switching") {
    if (p.constraints.empty()) throw InputError("run: switching needs constraints in the problem file");
    std::vector<FirstOrderOracle> gl;
    double Mg = 0.0;
    for (const auto& lc : p.constraints) {
      FirstOrderOracle g = linear_oracle(lc.a);
      const double b = lc.b;
      auto base = g.eval;
      g.eval = [base, b](const Vec& x) {
        Eval e = base(x);
        e.f -= b;
        return e;
      };
      Mg = std::max(Mg, lc.a.norm());
      gl.push_back(std::move(g));
    }
    SwitchingOptions o;
    o.Mf = need(p.M, "M");
    o.Mg = Mg;
    o.eps = c.eps.value_or(0.1);
    o.Q = set;
    o.m = static_cast<int>(gl.size());
    o.R0 = R_of();
    o.N = c.N.value_or(0);
    r = switching_subgradient(p.f, max_constraint(gl), x0, o).report;
  } else if (m == "ellipsoid") {
    EllipsoidOptions o;
    o.R = R_of();
    o.eps = eps;
    o.max_iter = c.N.value_or(0);
    r = ellipsoid_minimize(p.f, set_separation(set), x0, o);
  } else if (m == "gd") {
    r = gd_fixed(p.f, L_of(), x0, c.N.value_or(1000), geo.get());
  } else if (m == "cheb") {
    r = chebyshev(need_quad(p, m), x0, c.N.value_or(100));
  } else if (m == "hb") {
    r = heavy_ball(need_quad(p, m), x0, c.N.value_or(100));
  } else if (m == "cg") {
    r = conjugate_gradient(need_quad(p, m), x0, c.N.value_or(100), fixed_N ? 0.0 : eps);
  } else if (m == "agd" || m == "agd-adaptive") {
    ModelOptions o;
    o.adaptive = m == "agd-adaptive";
    o.L0 = o.adaptive ? c.L0.value_or(1.0) : L_of();
    o.N = c.N.value_or(100000);
    o.eps = fixed_N ? 0.0 : eps;
    if (p.R && c.geometry == "euclid") o.R2 = 0.5 * *p.R * *p.R;
    r = adaptive_accelerated(gradient_model(p.f), *geo, x0, o);
  } else if (m == "universal") {
    UniversalOptions o;
    o.eps = c.eps.value_or(1e-3);
    o.L0 = c.L0.value_or(1.0);
    o.R = R_of();
    o.max_iter = c.N.value_or(1000000);
    r = universal_solve(p.f, *geo, x0, o);
  } else if (m == "restart") {
    RestartOptions o;
    o.mu = c.mu ? *c.mu : need(p.mu, "mu (problem field or --mu)");
    o.L = L_of();
    o.eps = eps;
    o.R = R_of();
    r = restart_strongly_convex(gradient_model(p.f), *geo, x0, o);
  } else if (m == "meta") {
    MetaOptions o;
    o.Lg = need(p.L, "L");
    o.H = c.L0.value_or(o.Lg);
    o.K = c.N.value_or(50);
    r = accelerated_meta_p1(FirstOrderOracle{}, p.f, x0, o);
  } else if (m == "fw") {
    LinearMinOracle lmo = make_lmo(set_spec, n);
    FWOptions o;
    o.N = c.N.value_or(1000);
    o.eps = fixed_N ? 0.0 : eps;
    Vec start = x0;
    if (!lmo.contains(start)) {
      Vertex v = lmo.solve(p.f(x0).g);
      start = v.y;
      o.x0_id = v.id;
    }
    r = frank_wolfe(p.f, lmo, start, o);
  } else {
    throw InputError("run: unknown method '" + m + "'");
  }

  RunOutcome out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double fx = r.x.size() == n ? p.f.value(r.x) : nan;
  out.final_gap = (p.fstar && std::isfinite(fx)) ? fx - *p.fstar : r.gap;
  const bool ok = r.status == Status::Converged || (std::isfinite(out.final_gap) && out.final_gap <= eps);
  if (r.status == Status::Error || r.status == Status::Infeasible)
    out.code = kExitFailure;
  else
    out.code = ok ? kExitConverged : kExitBudget;
  out.report = std::move(r);
  return out;
}

}  // namespace optikit::cli
