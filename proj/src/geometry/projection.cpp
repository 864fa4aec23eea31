#include "optikit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace optikit {

FeasibleSet FeasibleSet::simplex(double mass) {
  if (!(mass > 0)) throw InputError("simplex: mass must be positive");
  FeasibleSet s;
  s.kind = SetKind::Simplex;
  s.radius = mass;
  return s;
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || (hi - lo).minCoeff() < 0) throw InputError("box: bad bounds");
  FeasibleSet s;
  s.kind = SetKind::Box;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::ball(double r, Vec c) {
  if (!(r > 0)) throw InputError("ball: radius must be positive");
  FeasibleSet s;
  s.kind = SetKind::Ball;
  s.radius = r;
  s.center = std::move(c);
  return s;
}

FeasibleSet FeasibleSet::l1ball(double r) {
  if (!(r > 0)) throw InputError("l1ball: radius must be positive");
  FeasibleSet s;
  s.kind = SetKind::L1Ball;
  s.radius = r;
  return s;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  switch (kind) {
    case SetKind::Whole: return x.allFinite();
    case SetKind::Simplex: return x.minCoeff() >= -tol && std::abs(x.sum() - radius) <= tol * std::max<double>(1.0, x.size());
    case SetKind::Box: return (x - lo).minCoeff() >= -tol && (hi - x).minCoeff() >= -tol;
    case SetKind::Ball: {
      double n = center.size() ? (x - center).norm() : x.norm();
      return n <= radius + tol;
    }
    case SetKind::L1Ball: return x.lpNorm<1>() <= radius + tol;
  }
  return false;
}

std::string FeasibleSet::describe() const {
  std::ostringstream os;
  switch (kind) {
    case SetKind::Whole: os << "R^n"; break;
    case SetKind::Simplex: os << "simplex(" << radius << ")"; break;
    case SetKind::Box: os << "box"; break;
    case SetKind::Ball: os << "ball(" << radius << ")"; break;
    case SetKind::L1Ball: os << "l1ball(" << radius << ")"; break;
  }
  return os.str();
}

Vec project_simplex(const Vec& y, double mass) {
  const int n = static_cast<int>(y.size());
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  for (int j = 0; j < n; ++j) {
    css += u[j];
    double t = (css - mass) / (j + 1);
    if (u[j] - t > 0) tau = t;
  }
  Vec x = (y.array() - tau).max(0.0).matrix();
  return x;
}

Vec project_l1ball(const Vec& y, double r) {
  if (y.lpNorm<1>() <= r) return y;
  Vec w = project_simplex(y.cwiseAbs(), r);
  for (int i = 0; i < y.size(); ++i)
    if (y[i] < 0) w[i] = -w[i];
  return w;
}

Vec project_euclidean(const FeasibleSet& s, const Vec& y) {
  switch (s.kind) {
    case SetKind::Whole: return y;
    case SetKind::Simplex: return project_simplex(y, s.radius);
    case SetKind::Box:
      if (s.lo.size() != y.size()) throw InputError("project: box dimension");
      return y.cwiseMax(s.lo).cwiseMin(s.hi);
    case SetKind::Ball: {
      Vec c = s.center.size() ? s.center : Vec(Vec::Zero(y.size()));
      Vec r = y - c;
      double n = r.norm();
      if (n <= s.radius) return y;
      return c + r * (s.radius / n);
    }
    case SetKind::L1Ball: return project_l1ball(y, s.radius);
  }
  throw InputError("project: unsupported set");
}

}  // namespace optikit
