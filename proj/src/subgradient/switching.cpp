#include "optikit/subgradient.hpp"

#include <cmath>
#include <limits>

namespace optikit {

ConstraintOracle max_constraint(std::vector<FirstOrderOracle> gl) {
  if (gl.empty()) throw InputError("max_constraint: no constraints");
  return [gl](const Vec& x) {
    ConstraintValue best;
    for (std::size_t l = 0; l < gl.size(); ++l) {
      Eval e = gl[l](x);
      if (l == 0 || e.f > best.value) {
        best.value = e.f;
        best.index = static_cast<int>(l);
        best.grad = std::move(e.g);
      }
    }
    return best;
  };
}

long switching_iterations_first(double Mf, double Mg, double R0, double eps) {
  double M2 = std::max(Mf * Mf, Mg * Mg);
  return static_cast<long>(std::ceil(R0 * R0 * M2 / (eps * eps)));
}

long switching_iterations_second(double Mf, double Mg, double Rbar, double eps) {
  double M2 = std::max(Mf * Mf, Mg * Mg);
  return static_cast<long>(std::ceil(2.0 * M2 * Rbar * Rbar / (eps * eps)));
}

SwitchingResult switching_subgradient(const FirstOrderOracle& f, const ConstraintOracle& g,
                                      const Vec& x0, const SwitchingOptions& o) {
  if (x0.size() != f.dim) throw InputError("switching: x0 dimension");
  if (!(o.Mf > 0 && o.Mg > 0 && o.eps > 0)) throw InputError("switching: Mf, Mg, eps must be positive");
  if (o.m < 1) throw InputError("switching: m must be positive");
  long N = o.N;
  if (N <= 0) {
    if (o.Rbar > 0)
      N = switching_iterations_second(o.Mf, o.Mg, o.Rbar, o.eps);
    else if (o.R0 > 0)
      N = switching_iterations_first(o.Mf, o.Mg, o.R0, o.eps);
    else
      throw InputError("switching: need N, R0 or Rbar");
  }
  const double hf = o.eps / (o.Mf * o.Mf), hg = o.eps / (o.Mg * o.Mg);

  SwitchingResult res;
  Vec x = project_euclidean(o.Q, x0);
  Vec sum = Vec::Zero(x.size());
  std::vector<long> count(o.m, 0);
  // S = sum_I hf^2/2 |grad f|^2 + sum_J (hg^2/2 |grad g|^2 - hg g(x_k)); gap bound (S + Rbar^2)/(hf |I|)
  double S = 0.0;
  Trace tr;
  long calls = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (long k = 0; k < N; ++k) {
    ConstraintValue c = g(x);
    ++calls;
    if (c.index < 0 || c.index >= o.m) throw InputError("switching: constraint index out of range");
    double fx = nan;
    if (c.value <= o.eps) {
      Eval e = f(x);
      ++calls;
      fx = e.f;
      sum += x;
      ++res.productive;
      S += 0.5 * hf * hf * e.g.squaredNorm();
      x = project_euclidean(o.Q, x - hf * e.g);
    } else {
      ++count[c.index];
      ++res.nonproductive;
      S += 0.5 * hg * hg * c.grad.squaredNorm() - hg * c.value;
      x = project_euclidean(o.Q, x - hg * c.grad);
    }
    double bound = (o.Rbar > 0 && res.productive > 0)
                       ? (S + o.Rbar * o.Rbar) / (hf * static_cast<double>(res.productive))
                       : nan;
    tr.record({k, fx, bound, std::max(0.0, c.value), 0.0, calls, 0});
    if (o.stop_on_certificate && bound <= o.eps) break;
  }

  if (res.productive == 0) {
    res.report = finalize(std::move(tr), x, o.eps);
    res.report.status = Status::Error;
    res.report.message =
        "invalid premise: no productive step within the budget (check R0/Rbar, Mf, Mg, Slater point)";
    res.x_hat = x;
    res.gap = res.gap_bound = nan;
    return res;
  }
  res.x_hat = sum / static_cast<double>(res.productive);
  res.weights.assign(res.productive, 1.0 / static_cast<double>(res.productive));
  res.lambda = Vec::Zero(o.m);
  for (int l = 0; l < o.m; ++l)
    res.lambda[l] = hg * static_cast<double>(count[l]) / (hf * static_cast<double>(res.productive));
  res.f_hat = f.value(res.x_hat);
  res.g_hat = g(res.x_hat).value;
  res.gap_bound = o.Rbar > 0 ? (S + o.Rbar * o.Rbar) / (hf * static_cast<double>(res.productive)) : nan;
  res.gap = o.dual ? res.f_hat - o.dual(res.lambda) : nan;
  res.report = finalize(std::move(tr), res.x_hat, o.eps);
  res.report.fval = res.f_hat;
  double cert = o.dual ? res.gap : res.gap_bound;
  res.report.gap = cert;
  res.report.status = (std::isfinite(cert) && cert <= o.eps && res.g_hat <= o.eps) ? Status::Converged
                                                                                   : Status::IterBudget;
  if (!std::isfinite(cert) && res.g_hat <= o.eps) res.report.status = Status::Converged;
  return res;
}

}  // namespace optikit
