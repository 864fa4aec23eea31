#include "engine.hpp"

#include <cmath>
#include <limits>

namespace optikit {

namespace detail {

Vec model_step(const ModelResponse& r, const Geometry& geo, double alpha, const Vec& u) {
  if (r.h) return r.h->prox(geo, alpha, r.g, u);
  return geo.mirror_step(u, r.g, alpha);
}

namespace {

double slack(double F) { return 1e-12 * std::max(1.0, std::abs(F)); }

void check_start(const ModelOracle& model, const Geometry& geo, const Vec& x0, double L0) {
  if (x0.size() != model.dim) throw InputError("model method: x0 dimension");
  if (!(L0 > 0)) throw InputError("model method: L0 must be positive");
  if (!geo.set().contains(x0, 1e-9)) throw InputError("model method: x0 is outside the feasible set");
}

double known_gap(const ModelOracle& model, double F) {
  return model.opt ? F - model.opt->f : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Report accel_engine(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                    const AccelParams& p, ModelLog* log) {
  check_start(model, geo, x0, p.L0);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double sigma = geo.strong_convexity();
  const double L_cap = p.L_max_factor * p.L0;
  Vec x = x0, u = x0;
  double A = 0.0, sumDA = 0.0;
  double L = p.adaptive ? p.L0 / 2.0 : p.L0;
  long calls = 0, tests = 0;
  Trace tr;
  if (log) {
    log->x.push_back(x);
    log->u.push_back(u);
  }
  double bound = std::numeric_limits<double>::infinity();
  long k = 0;
  for (; k < p.N; ++k) {
    double alpha = 0, An = 0, delta = 0, Fx = nan;
    Vec y, un, xn;
    for (;;) {
      alpha = (1.0 + std::sqrt(1.0 + 4.0 * A * L)) / (2.0 * L);
      An = A + alpha;
      delta = p.delta ? p.delta(alpha, An) : 0.0;
      y = (alpha * u + A * x) / An;
      ModelResponse ry = model.query(y);
      ++calls;
      un = model_step(ry, geo, alpha, u);
      xn = (alpha * un + A * x) / An;
      if (!p.adaptive) break;
      ModelResponse rx = model.query(xn);
      ++calls;
      ++tests;
      Fx = rx.F;
      double dist = geo.norm(xn - y);
      double rhs = ry.F + ry.psi(xn) + 0.5 * L / sigma * dist * dist + delta;
      if (Fx <= rhs + slack(Fx)) break;
      L *= 2.0;
      if (L > L_cap) throw ModelMismatch("model method: L exceeded the safety cap; the declared model does not hold");
    }
    A = An;
    sumDA += delta * An;
    x = std::move(xn);
    u = std::move(un);
    if (log) {
      log->L.push_back(L);
      log->A.push_back(A);
      log->alpha.push_back(alpha);
      log->delta.push_back(delta);
      log->x.push_back(x);
      log->y.push_back(y);
      log->u.push_back(u);
    }
    double fval = model.true_value ? model.true_value(x) : Fx;
    if (p.R2) bound = (*p.R2 + 2.0 * sumDA + static_cast<double>(k + 1) * p.delta_tilde) / A;
    double gap = p.R2 ? bound : known_gap(model, fval);
    tr.record({k + 1, fval, gap, 0.0, L, calls, 0});
    if (p.adaptive) L /= 2.0;
    if (p.stop && p.stop(A)) {
      ++k;
      break;
    }
    if (p.eps > 0 && p.R2 && bound <= p.eps) {
      ++k;
      break;
    }
  }
  if (log) log->tests += tests;
  Report r = finalize(std::move(tr), x, p.eps > 0 ? p.eps : -1.0);
  r.iterations = k;
  r.oracle_calls = calls;
  if (r.trace.empty()) r.fval = model.true_value ? model.true_value(x) : nan;
  return r;
}

}  // namespace detail

Report adaptive_accelerated(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                            const ModelOptions& opt, ModelLog* log) {
  detail::AccelParams p;
  p.L0 = opt.L0;
  p.N = opt.N;
  p.adaptive = opt.adaptive;
  p.L_max_factor = opt.L_max_factor;
  p.delta_tilde = opt.delta_tilde;
  p.R2 = opt.R2;
  p.eps = opt.eps;
  const double d = opt.delta;
  if (d < 0 || opt.delta_tilde < 0) throw InputError("model method: delta must be nonnegative");
  p.delta = [d](double, double) { return d; };
  return detail::accel_engine(model, geo, x0, p, log);
}

Report adaptive_model_gd(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                         const ModelOptions& opt, ModelLog* log) {
  detail::check_start(model, geo, x0, opt.L0);
  if (opt.delta < 0 || opt.delta_tilde < 0) throw InputError("model method: delta must be nonnegative");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double L_cap = opt.L_max_factor * opt.L0;
  Vec x = x0;
  ModelResponse rx = model.query(x);
  long calls = 1, tests = 0;
  double L = opt.adaptive ? opt.L0 / 2.0 : opt.L0;
  double maxL = 0.0;
  Vec sum = Vec::Zero(x.size());
  Trace tr;
  if (log) log->x.push_back(x);
  long k = 0;
  for (; k < opt.N; ++k) {
    Vec xn;
    ModelResponse rn;
    for (;;) {
      xn = detail::model_step(rx, geo, 1.0 / L, x);
      rn = model.query(xn);
      ++calls;
      if (!opt.adaptive) break;
      ++tests;
      double rhs = rx.F + rx.psi(xn) + L * geo.bregman(xn, x) + opt.delta;
      if (rn.F <= rhs + detail::slack(rn.F)) break;
      L *= 2.0;
      if (L > L_cap) throw ModelMismatch("model method: L exceeded the safety cap; the declared model does not hold");
    }
    maxL = std::max(maxL, L);
    x = std::move(xn);
    rx = std::move(rn);
    sum += x;
    if (log) {
      log->L.push_back(L);
      log->x.push_back(x);
    }
    Vec avg = sum / static_cast<double>(k + 1);
    double fval = model.true_value ? model.true_value(avg) : nan;
    double gap = opt.R2 ? maxL * *opt.R2 / static_cast<double>(k + 1) + maxL * opt.delta_tilde + 2.0 * opt.delta
                        : detail::known_gap(model, fval);
    tr.record({k + 1, fval, gap, 0.0, L, calls, 0});
    if (opt.adaptive) L /= 2.0;
    if (opt.eps > 0 && opt.R2 && gap <= opt.eps) {
      ++k;
      break;
    }
  }
  if (log) log->tests += tests;
  Vec out = k > 0 ? Vec(sum / static_cast<double>(k)) : x;
  Report r = finalize(std::move(tr), out, opt.eps > 0 ? opt.eps : -1.0);
  r.iterations = k;
  r.oracle_calls = calls;
  return r;
}

}  // namespace optikit
