#include "optikit/geometry.hpp"
#include "optikit/univariate.hpp"

#include <cmath>

namespace optikit {

double Geometry::bregman(const Vec& x, const Vec& y) const {
  return d(x) - d(y) - grad_d(y).dot(x - y);
}

Vec Geometry::start_point(int n) const { return project_euclidean(set_, Vec::Zero(n)); }

// --- Euclidean ----------------------------------------------------------------

EuclideanGeometry::EuclideanGeometry(FeasibleSet s) { set_ = std::move(s); }
double EuclideanGeometry::d(const Vec& x) const { return 0.5 * x.squaredNorm(); }
Vec EuclideanGeometry::grad_d(const Vec& x) const { return x; }
double EuclideanGeometry::norm(const Vec& v) const { return v.norm(); }
double EuclideanGeometry::dual_norm(const Vec& v) const { return v.norm(); }
double EuclideanGeometry::bregman(const Vec& x, const Vec& y) const {
  return 0.5 * (x - y).squaredNorm();
}

Vec EuclideanGeometry::mirror_step(const Vec& x, const Vec& g, double h) const {
  if (!(h > 0)) throw InputError("mirror_step: h must be positive");
  return project_euclidean(set_, x - h * g);
}

std::unique_ptr<Geometry> EuclideanGeometry::recenter(const Vec&) const { return clone(); }
std::unique_ptr<Geometry> EuclideanGeometry::clone() const {
  return std::make_unique<EuclideanGeometry>(*this);
}

// --- entropy on the simplex ---------------------------------------------------

EntropyGeometry::EntropyGeometry(int n) : n_(n) {
  if (n < 1) throw InputError("entropy: n must be positive");
  set_ = FeasibleSet::simplex();
}

double EntropyGeometry::d(const Vec& x) const {
  double s = std::log(static_cast<double>(n_));
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw DomainError("entropy: negative coordinate");
    if (x[i] > 0) s += x[i] * std::log(x[i]);
  }
  return s;
}

Vec EntropyGeometry::grad_d(const Vec& x) const {
  if (x.minCoeff() <= 0) throw DomainError("entropy: gradient undefined on the boundary");
  return (x.array().log() + 1.0).matrix();
}

double EntropyGeometry::norm(const Vec& v) const { return v.lpNorm<1>(); }
double EntropyGeometry::dual_norm(const Vec& v) const { return v.lpNorm<Eigen::Infinity>(); }

double EntropyGeometry::bregman(const Vec& x, const Vec& y) const {
  if (y.minCoeff() <= 0) throw DomainError("entropy: divergence undefined at boundary y");
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw DomainError("entropy: negative coordinate");
    if (x[i] > 0) s += x[i] * std::log(x[i] / y[i]);
    s += y[i] - x[i];
  }
  return s;
}

Vec EntropyGeometry::mirror_step(const Vec& x, const Vec& g, double h) const {
  if (!(h > 0)) throw InputError("mirror_step: h must be positive");
  if (x.minCoeff() <= 0) throw DomainError("entropy: mirror step from a boundary point");
  Vec w = x.array().log().matrix() - h * g;
  double m = w.maxCoeff();
  Vec e = (w.array() - m).exp().matrix();
  return e / e.sum();
}

std::unique_ptr<Geometry> EntropyGeometry::recenter(const Vec&) const {
  throw InputError("entropy geometry has omega = inf; use --geometry anorm for restarts");
}
std::unique_ptr<Geometry> EntropyGeometry::clone() const {
  return std::make_unique<EntropyGeometry>(*this);
}
Vec EntropyGeometry::start_point(int n) const {
  return Vec::Constant(n, 1.0 / n);
}

// --- a-norm prox on the simplex ----------------------------------------------

double anorm_exponent(int n) {
  if (n < 2) throw InputError("anorm: n must be at least 2");
  double L = std::log(static_cast<double>(n));
  return 2.0 * L / (2.0 * L - 1.0);
}

ANormGeometry::ANormGeometry(int n, Vec center, bool e_scaled)
    : n_(n), a_(anorm_exponent(n)), z_(center.size() ? std::move(center) : Vec(Vec::Zero(n))),
      e_scaled_(e_scaled) {
  if (z_.size() != n) throw InputError("anorm: center dimension");
  set_ = FeasibleSet::simplex();
}

double ANormGeometry::kappa() const { return (e_scaled_ ? std::exp(1.0) : 1.0) / (2.0 * (a_ - 1.0)); }

double ANormGeometry::d(const Vec& x) const {
  double s = (x - z_).array().abs().pow(a_).sum();
  return kappa() * std::pow(s, 2.0 / a_);
}

Vec ANormGeometry::grad_d(const Vec& x) const {
  Vec w = x - z_;
  double s = w.array().abs().pow(a_).sum();
  if (s == 0) return Vec::Zero(w.size());
  double na = std::pow(s, 1.0 / a_);
  double rho = 2.0 * kappa() * std::pow(na, 2.0 - a_);
  Vec g(w.size());
  for (int i = 0; i < w.size(); ++i)
    g[i] = rho * (w[i] > 0 ? 1.0 : (w[i] < 0 ? -1.0 : 0.0)) * std::pow(std::abs(w[i]), a_ - 1.0);
  return g;
}

double ANormGeometry::norm(const Vec& v) const {
  if (e_scaled_) return v.lpNorm<1>();
  return std::pow(v.array().abs().pow(a_).sum(), 1.0 / a_);
}

double ANormGeometry::dual_norm(const Vec& v) const {
  if (e_scaled_) return v.lpNorm<Eigen::Infinity>();
  double b = a_ / (a_ - 1.0);
  double m = v.lpNorm<Eigen::Infinity>();
  if (m == 0) return 0.0;
  return m * std::pow((v.array().abs() / m).pow(b).sum(), 1.0 / b);
}

double ANormGeometry::omega() const { return 2.0 * kappa(); }

Vec ANormGeometry::solve_linear(const Vec& c) const {
  if (c.size() != n_) throw InputError("anorm: dimension");
  const double a = a_, p = 1.0 / (a_ - 1.0), k2 = 2.0 * kappa();
  // x_i(theta, rho) minimizes (c_i - theta) x + rho/a |x - z_i|^a over x >= 0.
  auto x_of = [&](double theta, double rho, Vec& x) {
    for (int i = 0; i < n_; ++i) {
      double r = c[i] - theta;
      double mag = std::pow(std::abs(r) / rho, p);
      double v = r > 0 ? z_[i] - mag : z_[i] + mag;
      x[i] = std::max(0.0, v);
    }
  };
  Vec x(n_);
  auto solve_theta = [&](double rho) {
    auto mass = [&](double th) {
      x_of(th, rho, x);
      return x.sum() - 1.0;
    };
    // bracket: mass is nondecreasing in theta
    double lo = c.minCoeff() - 1.0, hi = c.maxCoeff() + 1.0, step = 1.0;
    while (mass(lo) > 0) {
      step *= 2.0;
      lo -= step;
    }
    step = 1.0;
    while (mass(hi) < 0) {
      step *= 2.0;
      hi += step;
    }
    double th = bisect_root(mass, lo, hi, 0.0, 400);
    x_of(th, rho, x);
    return th;
  };
  // rho = 2 kappa ||x - z||_a^{2-a}; phi(rho) is increasing in rho.
  auto phi = [&](double lr) {
    double rho = std::exp(lr);
    solve_theta(rho);
    // theta not resolvable in double: the mass jumps across 1 within one ulp. This only
    // happens for rho far below the root, where phi is negative.
    if (!(std::abs(x.sum() - 1.0) <= 1e-6)) return -std::numeric_limits<double>::infinity();
    double s = (x - z_).array().abs().pow(a).sum();
    return rho - k2 * std::pow(s, (2.0 - a) / a);
  };
  double lr_hi = std::log(2.0 * k2 + 1e-300) + 1.0;
  double lr_lo = std::log(k2) - 60.0;
  for (int k = 0; k < 60 && phi(lr_hi) < 0; ++k) lr_hi += 5.0;
  double lr;
  if (phi(lr_lo) >= 0)
    lr = lr_lo;
  else
    lr = bisect_root(phi, lr_lo, lr_hi, 1e-15, 400);
  solve_theta(std::exp(lr));
  x = x.cwiseMax(0.0);
  return x / x.sum();
}

Vec ANormGeometry::mirror_step(const Vec& x, const Vec& g, double h) const {
  if (!(h > 0)) throw InputError("mirror_step: h must be positive");
  return solve_linear(h * g - grad_d(x));
}

std::unique_ptr<Geometry> ANormGeometry::recenter(const Vec& z) const {
  return std::make_unique<ANormGeometry>(n_, z, e_scaled_);
}
std::unique_ptr<Geometry> ANormGeometry::clone() const {
  return std::make_unique<ANormGeometry>(*this);
}
Vec ANormGeometry::start_point(int n) const { return Vec::Constant(n, 1.0 / n); }

std::unique_ptr<Geometry> anorm_prox(int n) { return std::make_unique<ANormGeometry>(n); }
std::unique_ptr<Geometry> anorm_prox_l1(int n) {
  return std::make_unique<ANormGeometry>(n, Vec(), true);
}

std::unique_ptr<Geometry> make_geometry(const std::string& name, int n, const FeasibleSet& s) {
  if (name == "euclid") return std::make_unique<EuclideanGeometry>(s);
  if (name == "entropy") return std::make_unique<EntropyGeometry>(n);
  if (name == "anorm") return anorm_prox(n);
  throw InputError("unknown geometry: " + name);
}

}  // namespace optikit
