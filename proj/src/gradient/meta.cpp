#include "optikit/gradient.hpp"

#include <cmath>
#include <limits>

namespace optikit {

double meta_bound(double H, double R, long k) {
  double kk = static_cast<double>(k);
  return 4.0 * H * R * R / (kk * kk);
}

Report accelerated_meta_p1(const FirstOrderOracle& f, const FirstOrderOracle& g, const Vec& x0,
                           const MetaOptions& o, const ProxSolver& exact, MetaLog* log) {
  const bool has_f = f.dim > 0;
  if (x0.size() != g.dim || (has_f && f.dim != g.dim)) throw InputError("meta: dimension mismatch");
  if (!(o.H > 0)) throw InputError("meta: H must be positive");
  if (!exact && !(o.Lg > 0)) throw InputError("meta: the inner gradient solver needs Lg > 0");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double H = o.H, lambda = 1.0 / (2.0 * H);
  const double c = H / (3.0 * H + 2.0 * o.Lg);
  const double step = 1.0 / (H + o.Lg);
  const int n = g.dim;

  auto F = [&](const Vec& x) { return (has_f ? f.value(x) : 0.0) + g.value(x); };
  std::optional<double> Fstar;
  if (g.opt && !has_f) Fstar = g.opt->f;

  Vec x = x0, y = x0;
  double A = 0.0;
  long calls = 0, gcalls = 0;
  Trace tr;
  bool failed = false;
  long k = 0;
  for (; k < o.K; ++k) {
    double a = (lambda + std::sqrt(lambda * lambda + 4.0 * lambda * A)) / 2.0;
    double An = A + a;
    Vec xt = (A * y + a * x) / An;
    Vec s = Vec::Zero(n);
    if (has_f) {
      s = f(xt).g;
      ++calls;
    }
    Vec yn;
    long inner = 0;
    if (exact) {
      yn = exact(xt, s, H);
    } else {
      // phi(z) = <s, z> + g(z) + H/2 |z - xt|^2 is H-strongly convex, so
      // |z - z*| <= |grad phi(z)| / H certifies the inner accuracy
      Vec z = xt;
      bool ok = false;
      for (; inner <= o.inner_budget; ++inner) {
        Vec gp = s + g(z).g + H * (z - xt);
        ++gcalls;
        double r = gp.norm() / H;
        if (r == 0.0 || r <= c * ((xt - z).norm() - r)) {
          ok = true;
          break;
        }
        if (inner == o.inner_budget) break;
        z -= step * gp;
      }
      if (!ok) {
        failed = true;
        y = z;
        break;
      }
      yn = std::move(z);
    }
    Vec grad = g(yn).g;
    ++gcalls;
    if (has_f) {
      grad += f(yn).g;
      ++calls;
    }
    x -= a * grad;
    y = std::move(yn);
    A = An;
    if (log) {
      log->inner_steps.push_back(inner);
      log->lambda.push_back(lambda);
      log->y.push_back(y);
    }
    double Fy = F(y);
    tr.record({k + 1, Fy, Fstar ? Fy - *Fstar : nan, 0.0, H, calls + gcalls, 0});
  }
  if (log) log->g_calls += gcalls;
  Report r = finalize(std::move(tr), y, -1.0);
  r.oracle_calls = calls + gcalls;
  r.iterations = k;
  r.fval = F(y);
  if (failed) {
    r.status = Status::Error;
    r.message = "meta: inner solver did not meet the accuracy test within its budget at outer step " +
                std::to_string(k);
  }
  return r;
}

}  // namespace optikit
