#pragma once

#include "optikit/core.hpp"

#include <limits>
#include <memory>
#include <string>

namespace optikit {

enum class SetKind { Whole, Simplex, Box, Ball, L1Ball };

struct FeasibleSet {
  SetKind kind = SetKind::Whole;
  double radius = 1.0;  // Ball, L1Ball; Simplex total mass
  Vec lo, hi;           // Box
  Vec center;           // Ball (empty = origin)

  static FeasibleSet whole() { return {}; }
  static FeasibleSet simplex(double mass = 1.0);
  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet ball(double r, Vec c = Vec());
  static FeasibleSet l1ball(double r);

  bool contains(const Vec& x, double tol = 1e-12) const;
  std::string describe() const;
};

// Euclidean projection onto a shipped set.
Vec project_euclidean(const FeasibleSet& s, const Vec& y);
Vec project_simplex(const Vec& y, double mass = 1.0);
Vec project_l1ball(const Vec& y, double r);

class Geometry {
 public:
  virtual ~Geometry() = default;
  virtual std::string name() const = 0;
  virtual double d(const Vec& x) const = 0;
  virtual Vec grad_d(const Vec& x) const = 0;
  virtual double norm(const Vec& v) const = 0;
  virtual double dual_norm(const Vec& v) const = 0;
  virtual double bregman(const Vec& x, const Vec& y) const;
  // argmin_{u in Q} h<g, u - x> + V(u, x)
  virtual Vec mirror_step(const Vec& x, const Vec& g, double h) const = 0;
  // sup 2V(x,c)/||x-c||^2 for the prox centred at c; +inf when unbounded
  virtual double omega() const = 0;
  // prox d(. - z + c0) with d^z(z) minimal; throws when omega is infinite
  virtual std::unique_ptr<Geometry> recenter(const Vec& z) const = 0;
  virtual std::unique_ptr<Geometry> clone() const = 0;
  // modulus of strong convexity of d in norm()
  virtual double strong_convexity() const { return 1.0; }
  virtual Vec start_point(int n) const;

  const FeasibleSet& set() const { return set_; }

 protected:
  FeasibleSet set_;
};

class EuclideanGeometry : public Geometry {
 public:
  explicit EuclideanGeometry(FeasibleSet s = FeasibleSet::whole());
  std::string name() const override { return "euclid"; }
  double d(const Vec& x) const override;
  Vec grad_d(const Vec& x) const override;
  double norm(const Vec& v) const override;
  double dual_norm(const Vec& v) const override;
  double bregman(const Vec& x, const Vec& y) const override;
  Vec mirror_step(const Vec& x, const Vec& g, double h) const override;
  double omega() const override { return 1.0; }
  std::unique_ptr<Geometry> recenter(const Vec& z) const override;
  std::unique_ptr<Geometry> clone() const override;
};

// d(x) = log n + sum x_i log x_i on the simplex; V = KL divergence; norm = l1.
class EntropyGeometry : public Geometry {
 public:
  explicit EntropyGeometry(int n);
  std::string name() const override { return "entropy"; }
  double d(const Vec& x) const override;
  Vec grad_d(const Vec& x) const override;
  double norm(const Vec& v) const override;
  double dual_norm(const Vec& v) const override;
  double bregman(const Vec& x, const Vec& y) const override;
  Vec mirror_step(const Vec& x, const Vec& g, double h) const override;
  double omega() const override { return std::numeric_limits<double>::infinity(); }
  std::unique_ptr<Geometry> recenter(const Vec& z) const override;
  std::unique_ptr<Geometry> clone() const override;
  Vec start_point(int n) const override;

 private:
  int n_;
};

// d(x) = s/(2(a-1)) ||x - z||_a^2 on the simplex, a = 2 log n / (2 log n - 1).
// s = 1: norm() is ||.||_a. s = e: norm() is ||.||_1. d is 1-strongly convex in norm().
class ANormGeometry : public Geometry {
 public:
  explicit ANormGeometry(int n, Vec center = Vec(), bool e_scaled = false);
  std::string name() const override { return "anorm"; }
  double a() const { return a_; }
  const Vec& center() const { return z_; }
  double d(const Vec& x) const override;
  Vec grad_d(const Vec& x) const override;
  double norm(const Vec& v) const override;
  double dual_norm(const Vec& v) const override;
  Vec mirror_step(const Vec& x, const Vec& g, double h) const override;
  double omega() const override;
  std::unique_ptr<Geometry> recenter(const Vec& z) const override;
  std::unique_ptr<Geometry> clone() const override;
  Vec start_point(int n) const override;

  // argmin_{x in simplex} <c, x> + d(x)
  Vec solve_linear(const Vec& c) const;
  double kappa() const;  // d(x) = kappa ||x - z||_a^2

 private:
  int n_;
  double a_;
  Vec z_;
  bool e_scaled_;
};

double anorm_exponent(int n);
std::unique_ptr<Geometry> anorm_prox(int n);
// e-scaled variant, 1-strongly convex in the l1 norm
std::unique_ptr<Geometry> anorm_prox_l1(int n);
std::unique_ptr<Geometry> make_geometry(const std::string& name, int n, const FeasibleSet& s);

}  // namespace optikit
