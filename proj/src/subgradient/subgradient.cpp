#include "optikit/subgradient.hpp"

#include <cmath>
#include <limits>

namespace optikit {

StepPolicy parse_policy(const std::string& s) {
  if (s == "fixed-r" || s == "fixed") return StepPolicy::FixedR;
  if (s == "fixed-eps") return StepPolicy::FixedEps;
  if (s == "adaptive-eps" || s == "adaptive") return StepPolicy::AdaptiveEps;
  if (s == "adaptive-r") return StepPolicy::AdaptiveR;
  throw InputError("unknown step policy: " + s);
}

Report subgradient_descent(const FirstOrderOracle& f, const Vec& x0, const SubgradientOptions& o,
                           SubgradientLog* log) {
  if (x0.size() != f.dim) throw InputError("subgradient: x0 dimension");
  if (!(o.R > 0) || !(o.M > 0)) throw InputError("subgradient: R and M must be positive");
  long N = o.N;
  const bool needs_eps = o.policy == StepPolicy::FixedEps || o.policy == StepPolicy::AdaptiveEps;
  if ((needs_eps || N <= 0) && !(o.eps > 0)) throw InputError("subgradient: eps must be positive");
  if (N <= 0) {
    N = static_cast<long>(std::ceil(o.M * o.M * o.R * o.R / (o.eps * o.eps)));
  }
  const double sqrtN = std::sqrt(static_cast<double>(N));

  Vec x = project_euclidean(o.Q, x0);
  Vec sum = Vec::Zero(x.size());
  double sum_h = 0.0, sum_h2g2 = 0.0;
  Vec best = x;
  double f_best = std::numeric_limits<double>::infinity();
  std::vector<double> hs;
  Trace tr;
  long calls = 0;
  bool stationary = false;
  if (log) log->x.push_back(x);
  for (long k = 0; k < N; ++k) {
    Eval e = f(x);
    ++calls;
    if (e.f < f_best) {
      f_best = e.f;
      best = x;
    }
    double g2 = e.g.squaredNorm();
    double h = 0.0;
    switch (o.policy) {
      case StepPolicy::FixedR: h = o.R / (o.M * sqrtN); break;
      case StepPolicy::FixedEps: h = o.eps / (o.M * o.M); break;
      case StepPolicy::AdaptiveEps: h = g2 > 0 ? o.eps / g2 : 0.0; break;
      case StepPolicy::AdaptiveR: h = g2 > 0 ? o.R / (std::sqrt(g2) * sqrtN) : 0.0; break;
    }
    if (g2 == 0 && (o.policy == StepPolicy::AdaptiveEps || o.policy == StepPolicy::AdaptiveR)) {
      // a zero subgradient certifies optimality
      stationary = true;
      best = x;
      f_best = e.f;
      tr.record({k, e.f, 0.0, 0.0, 0.0, calls, 0});
      break;
    }
    sum += h * x;
    sum_h += h;
    sum_h2g2 += h * h * g2;
    hs.push_back(h);
    double gap = o.policy == StepPolicy::AdaptiveR ? o.R * o.R / sum_h
                                                   : (o.R * o.R + sum_h2g2) / (2.0 * sum_h);
    tr.record({k, e.f, gap, 0.0, 0.0, calls, 0});
    if (log) {
      log->g.push_back(e.g);
      log->h.push_back(h);
    }
    x = project_euclidean(o.Q, x - h * e.g);
    if (log) log->x.push_back(x);
  }

  Vec out;
  double gap;
  if (stationary) {
    out = best;
    gap = 0.0;
  } else if (o.policy == StepPolicy::AdaptiveR) {
    out = best;
    gap = o.R * o.R / sum_h;
  } else {
    out = sum / sum_h;
    gap = (o.R * o.R + sum_h2g2) / (2.0 * sum_h);
  }
  if (log && !stationary && o.policy != StepPolicy::AdaptiveR)
    for (double h : hs) log->weight.push_back(h / sum_h);
  Report r = finalize(std::move(tr), out, std::numeric_limits<double>::infinity());
  r.fval = f.value(out);
  r.gap = gap;
  r.status = gap <= o.eps ? Status::Converged : Status::IterBudget;
  return r;
}

}  // namespace optikit
