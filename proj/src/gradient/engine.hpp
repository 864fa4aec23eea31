#pragma once

#include "optikit/gradient.hpp"

#include <functional>

namespace optikit::detail {

// One code path for the similar-triangles family: fixed L (no test) or adaptive L.
struct AccelParams {
  double L0 = 1.0;
  long N = 100;
  bool adaptive = true;
  double L_max_factor = 1e6;
  double delta_tilde = 0.0;
  std::optional<double> R2;
  double eps = 0.0;
  // delta used in the acceptance test for a trial (alpha_{k+1}, A_{k+1})
  std::function<double(double alpha, double A)> delta;
  // certified stop: given A_N, return true to stop
  std::function<bool(double A)> stop;
};

Report accel_engine(const ModelOracle& model, const Geometry& geo, const Vec& x0,
                    const AccelParams& p, ModelLog* log);

// argmin_x alpha psi(x, y) + V(x, u) for a model response at y
Vec model_step(const ModelResponse& r, const Geometry& geo, double alpha, const Vec& u);

}  // namespace optikit::detail
