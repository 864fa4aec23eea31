#include "engine.hpp"

#include <cmath>
#include <limits>

namespace optikit {

long restart_stage_length(double L, double omega, double mu) {
  if (!(L > 0 && mu > 0)) throw InputError("restart: L and mu must be positive");
  if (!std::isfinite(omega))
    throw InputError("restart: the prox-function has unbounded omega on this set; use the a-norm geometry");
  return static_cast<long>(std::ceil(std::sqrt(16.0 * L * omega / mu)));
}

static long stage_count(double mu, double R, double eps) {
  double v = std::log2(mu * R * R / eps);
  return v > 0 ? static_cast<long>(std::ceil(v)) : 0;
}

long restart_total_count(double L, double omega, double mu, double R, double eps) {
  return restart_stage_length(L, omega, mu) * stage_count(mu, R, eps);
}

Report restart_strongly_convex(const ModelOracle& model, const Geometry& geo, const Vec& y0,
                               const RestartOptions& o, RestartLog* log) {
  if (!(o.eps > 0)) throw InputError("restart: eps must be positive");
  if (!(o.R > 0)) throw InputError("restart: R must be positive");
  const double omega = geo.omega();
  const long Nbar = restart_stage_length(o.L, omega, o.mu);
  const long K = std::min(stage_count(o.mu, o.R, o.eps), o.max_stages);
  if (log) log->stage_length = Nbar;

  Trace tr;
  Vec y = y0;
  long calls = 0, iters = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (long k = 0; k < K; ++k) {
    std::unique_ptr<Geometry> g = geo.recenter(y);
    ModelOptions mo;
    mo.L0 = o.L;
    mo.N = Nbar;
    mo.adaptive = o.adaptive;
    // the stage start is the prox center: V(x*, y) <= omega/2 |y - x*|^2 <= omega R_k^2 / 2
    Report s = adaptive_accelerated(model, *g, y, mo);
    const double bound = o.mu * o.R * o.R / std::ldexp(1.0, static_cast<int>(k + 2));
    const auto& rows = s.trace.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      TraceRecord rec = rows[i];
      rec.iter = iters + rows[i].iter;
      rec.oracle_calls = calls + rows[i].oracle_calls;
      rec.gap = i + 1 == rows.size() ? bound : nan;  // certified only at stage ends
      tr.record(rec);
    }
    iters += s.iterations;
    calls += s.oracle_calls;
    y = s.x;
    if (log) {
      double fv = model.true_value ? model.true_value(y) : nan;
      log->stage_gap.push_back(model.opt ? fv - model.opt->f : nan);
      log->stage_calls.push_back(calls);
      log->stage_x.push_back(y);
    }
  }
  Report r = finalize(std::move(tr), y, o.eps);
  r.iterations = iters;
  r.oracle_calls = calls;
  r.fval = model.true_value ? model.true_value(y) : nan;
  r.gap = o.mu * o.R * o.R / std::ldexp(1.0, static_cast<int>(K + 1));
  r.status = r.gap <= o.eps ? Status::Converged : Status::IterBudget;
  return r;
}

}  // namespace optikit
