#include "optikit/core.hpp"
#include "optikit/geometry.hpp"

#include <cmath>

namespace optikit {

double ModelResponse::psi(const Vec& x) const {
  double v = g.dot(x - y);
  if (h) v += h->value(x) - h->value(y);
  return v;
}

Vec ModelResponse::psi_subgrad(const Vec& x) const {
  if (!h) return g;
  return g + h->subgrad(x);
}

ModelOracle gradient_model(const FirstOrderOracle& f) {
  ModelOracle m;
  m.dim = f.dim;
  m.query = [f](const Vec& y) {
    Eval e = f(y);
    ModelResponse r;
    r.F = e.f;
    r.y = y;
    r.g = std::move(e.g);
    return r;
  };
  m.true_value = [f](const Vec& x) { return f.value(x); };
  m.meta = f.meta;
  m.opt = f.opt;
  return m;
}

ModelOracle composite_model(const FirstOrderOracle& f, std::shared_ptr<const Composite> h) {
  ModelOracle m;
  m.dim = f.dim;
  m.query = [f, h](const Vec& y) {
    Eval e = f(y);
    ModelResponse r;
    r.F = e.f + h->value(y);
    r.y = y;
    r.g = std::move(e.g);
    r.h = h;
    return r;
  };
  m.true_value = [f, h](const Vec& x) { return f.value(x) + h->value(x); };
  m.meta = f.meta;
  return m;
}

bool check_model(const ModelOracle& model, const Vec& x, const Vec& y, const Geometry& geo,
                 double delta, double L) {
  if (x.size() != model.dim || y.size() != model.dim) throw InputError("check_model: dimension");
  if (!model.true_value) throw InputError("check_model: no true-value oracle");
  ModelResponse r = model.query(y);
  double Fx = model.true_value(x);
  double gap = Fx - r.F - r.psi(x);
  double tol = 1e-9 * (1.0 + std::abs(Fx));
  double upper = L * geo.bregman(x, y) + delta;
  return gap >= -tol && gap <= upper + tol;
}

}  // namespace optikit
