#include "optikit/apps.hpp"
#include "optikit/cutting_plane.hpp"
#include "optikit/univariate.hpp"

#include <cmath>

namespace optikit {

namespace {

struct Inner {
  const Vec& c;
  const Vec& z;
  double a, gamma, T, sigma;

  double coord(int i, double l1, double l2, double x) const {
    double v = (c[i] + l1) * x + l2 * std::pow(std::abs(x - z[i]), a);
    if (x > 0) v += gamma * x * std::log(x);
    return v;
  }
  // x_i(lambda) by golden section on [0, 1]
  Vec primal(double l1, double l2) const {
    Vec x(c.size());
    for (int i = 0; i < c.size(); ++i) {
      Bracket b = golden_on_interval([&](double s) { return coord(i, l1, l2, s); }, 0.0, 1.0, sigma);
      x[i] = b.best;
    }
    return x;
  }
  double t_of(double l2) const {
    if (l2 <= 0) return 0.0;
    return std::min(std::pow(l2 * a / 2.0, 2.0 / (2.0 - a)), T);
  }
  // G(lambda) and its gradient at the inner minimizers
  double dual(double l1, double l2, const Vec& x, Eigen::Vector2d* grad) const {
    const double t = t_of(l2);
    double v = -l1 + t - l2 * std::pow(t, a / 2.0);
    double sx = 0.0, sa = 0.0;
    for (int i = 0; i < c.size(); ++i) {
      v += coord(i, l1, l2, x[i]);
      sx += x[i];
      sa += std::pow(std::abs(x[i] - z[i]), a);
    }
    if (grad) *grad << sx - 1.0, sa - std::pow(t, a / 2.0);
    return v;
  }
};

}  // namespace

double dual2d_box(const Vec& c, double gamma) {
  const double n = static_cast<double>(c.size());
  return 6.0 * c.lpNorm<Eigen::Infinity>() + 4.0 * gamma * std::log(2.0 * n) + 16.0;
}

double dual2d_primal(const Vec& c, double a, double gamma, const Vec& z, const Vec& x) {
  double v = c.dot(x);
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    s += std::pow(std::abs(x[i] - (z.size() ? z[i] : 0.0)), a);
    if (x[i] > 0) v += gamma * x[i] * std::log(x[i]);
  }
  return v + std::pow(s, 2.0 / a);
}

Dual2dResult dual2d_solve(const Vec& c, double a, double gamma, const Vec& z_in, const Dual2dOptions& o) {
  const int n = static_cast<int>(c.size());
  if (n < 1 || !c.allFinite()) throw InputError("dual2d: bad linear term");
  if (!(a > 1 && a < 2)) throw InputError("dual2d: need 1 < a < 2");
  if (gamma < 0) throw InputError("dual2d: gamma must be nonnegative");
  const Vec z = z_in.size() ? z_in : Vec(Vec::Zero(n));
  if (z.size() != n) throw InputError("dual2d: center dimension");
  // any T >= max |x - z|_a^2 over the box leaves the primal unchanged; 16 keeps the
  // Slater points of the box bound admissible for small n
  const double T = std::max(std::pow(static_cast<double>(n), 2.0 / a), 16.0);
  Inner in{c, z, a, gamma, T, o.sigma};
  Dual2dResult res;
  res.C = dual2d_box(c, gamma);
  const double C = res.C;

  FirstOrderOracle negG;
  negG.dim = 2;
  negG.eval = [&in](const Vec& l) {
    Vec x = in.primal(l[0], std::max(0.0, l[1]));
    Eigen::Vector2d g;
    double v = in.dual(l[0], std::max(0.0, l[1]), x, &g);
    return Eval{-v, -g};
  };
  SeparationOracle sep = [C](const Vec& l) -> std::optional<Vec> {
    if (l[1] < 0) return Vec(Vec::Unit(2, 1) * -1.0);
    if (std::abs(l[0]) + std::abs(l[1]) > C) {
      Vec g(2);
      g << (l[0] > 0 ? 1.0 : l[0] < 0 ? -1.0 : 0.0), (l[1] > 0 ? 1.0 : 0.0);
      return g;
    }
    return std::nullopt;
  };
  const double M = std::sqrt(2.0) * (n + std::pow(T, a / 2.0));
  EllipsoidOptions eo;
  eo.R = C;
  eo.eps = o.eps;
  // golden-section error in each coordinate perturbs the value by at most sigma times the slope
  const double slope = c.lpNorm<Eigen::Infinity>() + 2.0 * C * a + gamma * (1.0 - std::log(o.sigma));
  eo.delta = n * o.sigma * slope;
  eo.max_iter = o.max_iter > 0 ? o.max_iter : ellipsoid_iteration_bound(2, M, C, o.eps);
  eo.stop_on_certificate = true;
  Report r = ellipsoid_minimize(negG, sep, Vec::Zero(2), eo);
  res.iterations = r.iterations;
  double l1 = r.x[0], l2 = std::max(0.0, r.x[1]);
  // primal recovery: keep lambda2, re-solve lambda1 so that sum x(lambda) = 1
  auto mass = [&](double t) { return in.primal(t, l2).sum() - 1.0; };
  double lo = l1 - 1.0, hi = l1 + 1.0;
  for (int k = 0; k < 60 && mass(lo) < 0; ++k) lo -= std::ldexp(1.0, k);
  for (int k = 0; k < 60 && mass(hi) > 0; ++k) hi += std::ldexp(1.0, k);
  if (mass(lo) >= 0 && mass(hi) <= 0) l1 = bisect_root(mass, lo, hi, 1e-13);
  Vec x = in.primal(l1, l2);
  x = x.cwiseMax(0.0);
  x /= x.sum();
  res.x = x;
  res.lambda = {l1, l2};
  res.dual = in.dual(r.x[0], std::max(0.0, r.x[1]), in.primal(r.x[0], std::max(0.0, r.x[1])), nullptr);
  res.primal = dual2d_primal(c, a, gamma, z, x);
  res.box_active = std::abs(r.x[0]) + std::abs(r.x[1]) >= (1.0 - 1e-6) * C;
  return res;
}

}  // namespace optikit
