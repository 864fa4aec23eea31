#include "optikit/core.hpp"

#include <cmath>
#include <cstring>
#include <random>

namespace optikit {

FirstOrderOracle perturb_oracle(const FirstOrderOracle& f, double delta_grad, double delta_value,
                                const NoiseRule& rule) {
  if (delta_grad < 0 || delta_value < 0) throw InputError("perturb_oracle: negative delta");
  if (delta_grad == 0 && delta_value == 0) return f;

  FirstOrderOracle o = f;
  if (rule.kind == NoiseRule::Kind::ConstantOffset) {
    Vec off = rule.offset.size() ? rule.offset : Vec(Vec::Unit(f.dim, 0));
    if (off.size() != f.dim) throw InputError("perturb_oracle: offset dimension");
    double n = off.norm();
    if (n > 0) off *= delta_grad / n;
    o.eval = [f, off, delta_value](const Vec& x) {
      Eval e = f(x);
      e.g += off;
      e.f += delta_value;
      return e;
    };
  } else {
    // Direction depends only on (seed, x) so reruns and repeated queries agree.
    std::uint64_t seed = rule.seed;
    o.eval = [f, seed, delta_grad, delta_value](const Vec& x) {
      Eval e = f(x);
      std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
      for (int i = 0; i < x.size(); ++i) {
        std::uint64_t bits;
        double v = x[i];
        std::memcpy(&bits, &v, sizeof bits);
        h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      std::mt19937_64 rng(h);
      std::normal_distribution<double> nd;
      Vec dir(x.size());
      for (int i = 0; i < x.size(); ++i) dir[i] = nd(rng);
      double n = dir.norm();
      if (n > 0) e.g += dir * (delta_grad / n);
      std::uniform_real_distribution<double> ud(-1.0, 1.0);
      e.f += delta_value * ud(rng);
      return e;
    };
  }
  o.opt.reset();
  return o;
}

}  // namespace optikit
