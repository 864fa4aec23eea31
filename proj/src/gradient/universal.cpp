#include "engine.hpp"

#include <cmath>
#include <limits>

namespace optikit {

double universal_count(double nu, double Lnu, double R, double eps) {
  if (nu < 0 || nu > 1) throw InputError("universal_count: nu must lie in [0, 1]");
  if (!(Lnu > 0 && R > 0 && eps > 0)) throw InputError("universal_count: positive arguments required");
  const double q = 1.0 + 3.0 * nu;
  double v = std::pow(64.0, (1.0 + nu) / q) * std::pow(Lnu * std::pow(R, 1.0 + nu) / eps, 2.0 / q);
  if (nu < 1) v *= std::pow((2.0 - 2.0 * nu) / (1.0 + nu), (1.0 - nu) / q);
  return std::ceil(v);
}

Report universal_solve(const FirstOrderOracle& f, const Geometry& geo, const Vec& x0,
                       const UniversalOptions& opt, ModelLog* log) {
  if (!(opt.eps > 0)) throw InputError("universal: eps must be positive");
  if (!(opt.R > 0)) throw InputError("universal: R must be positive");
  ModelOracle model = gradient_model(f);
  detail::AccelParams p;
  p.L0 = opt.L0;
  p.N = opt.max_iter;
  p.adaptive = true;
  // the inexactness grows L(delta) like 1/delta, far beyond the smooth-case cap
  p.L_max_factor = std::numeric_limits<double>::max();
  const double R2 = opt.R * opt.R, eps = opt.eps;
  p.R2 = R2;
  double running = std::numeric_limits<double>::infinity();
  double last_ratio = running;
  // delta = eps * min over completed steps of alpha/(4A), including the trial step
  p.delta = [&running, &last_ratio, eps](double alpha, double A) {
    last_ratio = alpha / (4.0 * A);
    return eps * std::min(running, last_ratio);
  };
  p.stop = [&running, &last_ratio, R2, eps](double A) {
    running = std::min(running, last_ratio);
    return R2 / A <= eps / 2.0;
  };
  Report r = detail::accel_engine(model, geo, x0, p, log);
  r.status = (r.gap <= eps) ? Status::Converged : Status::IterBudget;
  return r;
}

}  // namespace optikit
