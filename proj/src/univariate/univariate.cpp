#include "optikit/univariate.hpp"

#include <cmath>

namespace optikit {

Bracket bisect(const SignOracle& sign, double x0, double d0, double eps) {
  if (!(d0 > 0) || !(eps > 0)) throw InputError("bisect: d0 and eps must be positive");
  Bracket b;
  auto ask = [&](double x) {
    ++b.calls;
    return sign(x);
  };
  int s0 = ask(x0);
  if (s0 == 0) {
    b.lo = b.hi = b.best = x0;
    return b;
  }
  // Phase 1: x_{k+1} = x_k + 2^k d towards x*.
  double dir = s0 < 0 ? 1.0 : -1.0;
  double prev = x0, cur = x0, step = d0;
  int s = s0;
  for (int k = 0; s == s0; ++k) {
    if (k > 1100) throw ProtocolError("bisect: oracle never changed sign");
    prev = cur;
    cur = cur + dir * step;
    step *= 2.0;
    s = ask(cur);
    if (s == 0) {
      b.lo = b.hi = b.best = cur;
      return b;
    }
  }
  b.lo = std::min(prev, cur);
  b.hi = std::max(prev, cur);
  // Phase 2: halve, keeping lo < x* < hi.
  while (b.hi - b.lo > eps) {
    double m = b.mid();
    int sm = ask(m);
    if (sm == 0) {
      b.lo = b.hi = m;
      break;
    }
    if (sm < 0)
      b.lo = m;
    else
      b.hi = m;
    b.lengths.push_back(b.hi - b.lo);
  }
  b.best = b.mid();
  return b;
}

double bisect_call_bound(double x0, double xstar, double d0, double eps) {
  double r = std::abs(xstar - x0);
  return 3.0 + (2.0 * std::log(d0 + r) - std::log(d0) - std::log(eps)) / std::log(2.0);
}

namespace {

// Phase 2 of golden section. a < c < b, f(c) <= min(f(a), f(b)).
Bracket golden_phase2(const ValueOracle& f, double a, double fa, double c, double fc, double b,
                      double fb, double eps, long calls) {
  Bracket r;
  r.calls = calls;
  double tol = 1e-12 * (1.0 + std::abs(fc));
  if (fc > std::min(fa, fb) + tol) throw ProtocolError("golden: interior value above an end");
  while (b - a > eps) {
    // new point in the larger part, placed from the bracket rather than mirrored about c,
    // which would amplify round-off in c by 1/kGolden per step
    const double x = (b - c > c - a) ? c + (1.0 - kGolden) * (b - c) : c - (1.0 - kGolden) * (c - a);
    double fx = f(x);
    ++r.calls;
    if (fx > fc) {
      // x becomes an endpoint, c stays interior
      if (x < c) {
        a = x;
        fa = fx;
      } else {
        b = x;
        fb = fx;
      }
    } else {
      // c becomes an endpoint, x becomes interior
      if (c < x) {
        a = c;
        fa = fc;
      } else {
        b = c;
        fb = fc;
      }
      c = x;
      fc = fx;
    }
    double t = 1e-12 * (1.0 + std::abs(fc));
    if (fc > std::max(fa, fb) + t) throw ProtocolError("golden: objective is not unimodal");
    r.lengths.push_back(b - a);
    if (b - a < 1e-15 * (1.0 + std::abs(c))) break;
  }
  r.lo = a;
  r.hi = b;
  r.best = c;
  r.fbest = fc;
  return r;
}

}  // namespace

Bracket golden_on_interval(const ValueOracle& f, double lo, double hi, double eps) {
  if (!(hi > lo)) throw InputError("golden: empty interval");
  double fa = f(lo), fb = f(hi);
  double c = hi - kGolden * (hi - lo);
  double fc = f(c);
  long calls = 3;
  // Monotone on the interval: shrink towards the better end until an interior point wins.
  while (fc > std::min(fa, fb)) {
    if (fa <= fb) {
      hi = c;
      fb = fc;
    } else {
      lo = c;
      fa = fc;
    }
    c = hi - kGolden * (hi - lo);
    fc = f(c);
    ++calls;
    if (hi - lo <= eps) {
      Bracket r;
      r.lo = lo;
      r.hi = hi;
      r.calls = calls;
      r.best = fa <= fb ? lo : hi;
      r.fbest = std::min(fa, fb);
      if (fc <= r.fbest) {
        r.best = c;
        r.fbest = fc;
      }
      return r;
    }
  }
  return golden_phase2(f, lo, fa, c, fc, hi, fb, eps, calls);
}

Bracket golden_section(const ValueOracle& f, double x0, double d, double eps) {
  if (d == 0 || !(eps > 0)) throw InputError("golden: step and eps must be nonzero");
  const double lambda = 1.0 + kGolden;
  double f0 = f(x0);
  double x1 = x0 + d;
  double f1 = f(x1);
  long calls = 2;
  if (f1 == f0) {
    // minimizer lies between x0 and x1 for a unimodal f
    Bracket r = golden_on_interval(f, std::min(x0, x1), std::max(x0, x1), eps);
    r.calls += calls;
    return r;
  }
  if (f1 > f0) {
    std::swap(x0, x1);
    std::swap(f0, f1);
    d = -d;
  }
  // Phase 1: x_{k+1} = x_k + d lambda^k until f stops decreasing.
  std::vector<double> xs{x0, x1}, fs{f0, f1};
  double step = d * lambda;
  while (fs.back() < fs[fs.size() - 2]) {
    if (xs.size() > 3000) throw ProtocolError("golden: no bracket found (unbounded below?)");
    double xn = xs.back() + step;
    step *= lambda;
    xs.push_back(xn);
    fs.push_back(f(xn));
    ++calls;
  }
  std::size_t N = xs.size() - 1;
  double a = xs[N - 2], c = xs[N - 1], b = xs[N];
  double fa = fs[N - 2], fc = fs[N - 1], fb = fs[N];
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  return golden_phase2(f, a, fa, c, fc, b, fb, eps, calls);
}

double newton_scalar(const ValueOracle& f, const ValueOracle& fprime, double theta0, double tol,
                     double lo, double hi, int max_iter) {
  if (!(theta0 > lo && theta0 < hi)) throw InputError("newton: start outside the interval");
  double th = theta0;
  double ft = f(th);
  if (std::abs(ft) <= tol) return th;
  double dp = fprime(th);
  if (dp == 0 || !std::isfinite(dp)) throw InputError("newton: zero derivative at start");
  const bool inc = dp > 0;
  double a = lo, b = hi;  // root in (a, b)
  auto shrink = [&](double t, double v) {
    bool right_of_root = (v > 0) == inc;
    if (right_of_root)
      b = t;
    else
      a = t;
  };
  shrink(th, ft);
  for (int it = 0; it < max_iter; ++it) {
    double d = fprime(th);
    double nt = (d != 0 && std::isfinite(d)) ? th - ft / d : std::nan("");
    if (!std::isfinite(nt) || nt <= a || nt >= b) {
      if (std::isfinite(a) && std::isfinite(b)) {
        nt = 0.5 * (a + b);
      } else if (std::isfinite(a)) {
        nt = th + std::max(1.0, std::abs(th - a));
      } else if (std::isfinite(b)) {
        nt = th - std::max(1.0, std::abs(b - th));
      } else {
        throw InputError("newton: no bracket");
      }
    }
    th = nt;
    ft = f(th);
    if (!std::isfinite(ft)) throw NumericalError("newton: non-finite residual");
    if (std::abs(ft) <= tol) return th;
    shrink(th, ft);
    if (std::isfinite(a) && std::isfinite(b) && b - a <= 4e-16 * std::max(1.0, std::abs(th))) {
      if ((std::isfinite(lo) && a == lo) || (std::isfinite(hi) && b == hi))
        throw InputError("newton: no sign change on the interval");
      return th;
    }
  }
  throw NumericalError("newton: iteration budget exhausted");
}

double bisect_root(const ValueOracle& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw InputError("bisect_root: no sign change");
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    double fm = f(m);
    if (fm == 0) return m;
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace optikit
