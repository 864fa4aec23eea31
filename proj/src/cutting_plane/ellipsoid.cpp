#include "optikit/cutting_plane.hpp"

#include <cmath>
#include <limits>

namespace optikit {

EllipsoidState ellipsoid_update(const EllipsoidState& e, const Vec& g) {
  const int n = static_cast<int>(e.c.size());
  if (g.size() != n) throw InputError("ellipsoid_update: dimension");
  if (g.squaredNorm() == 0) throw InputError("ellipsoid_update: zero cut");
  Vec Hg = e.H * g;
  double gHg = g.dot(Hg);
  if (!(gHg > 0)) throw NumericalError("ellipsoid_update: shape lost positive definiteness");
  double s = std::sqrt(gHg);
  EllipsoidState r;
  if (n == 1) {
    r.c = e.c - Vec::Constant(1, 0.5 * Hg[0] / s);
    r.H = e.H / 4.0;
    return r;
  }
  double dn = n;
  r.c = e.c - Hg / ((dn + 1.0) * s);
  r.H = (dn * dn / (dn * dn - 1.0)) * (e.H - (2.0 / (dn + 1.0)) * (Hg * Hg.transpose()) / gHg);
  r.H = 0.5 * (r.H + r.H.transpose());
  return r;
}

double det_ratio(int n) {
  if (n < 1) throw InputError("det_ratio: n must be positive");
  if (n == 1) return 0.25;
  double dn = n;
  return std::pow(dn * dn / (dn * dn - 1.0), dn) * (dn - 1.0) / (dn + 1.0);
}

double log_det(const Mat& H) {
  Eigen::LLT<Mat> llt(H);
  if (llt.info() != Eigen::Success) throw NumericalError("log_det: matrix not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

long ellipsoid_iteration_bound(int n, double M, double R, double eps) {
  if (!(M > 0 && R > 0 && eps > 0)) throw InputError("ellipsoid bound: M, R, eps must be positive");
  double v = 2.0 * n * n * std::log(M * R / eps);
  return std::max(1L, static_cast<long>(std::ceil(v)));
}

Report ellipsoid_minimize(const FirstOrderOracle& f, const SeparationOracle& sep, const Vec& x0,
                          const EllipsoidOptions& opt, EllipsoidLog* log) {
  const int n = f.dim;
  if (x0.size() != n) throw InputError("ellipsoid: x0 dimension");
  if (!(opt.R > 0) || !(opt.eps > 0) || opt.delta < 0) throw InputError("ellipsoid: bad options");
  long budget = opt.max_iter;
  if (budget <= 0) {
    if (!f.meta.M) throw InputError("ellipsoid: iteration budget needs M or max_iter");
    budget = ellipsoid_iteration_bound(n, *f.meta.M, opt.R, opt.eps);
  }

  EllipsoidState E{x0, Mat::Identity(n, n) * (opt.R * opt.R)};
  Trace tr;
  double f_best = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  Vec x_best;
  long calls = 0;
  bool stop = false;
  for (long k = 1; k <= budget && !stop; ++k) {
    if (log) {
      log->centers.push_back(E.c);
      log->shapes.push_back(E.H);
      log->log_det.push_back(log_det(E.H));
    }
    std::optional<Vec> cut = sep ? sep(E.c) : std::nullopt;
    ++calls;
    Vec g;
    double feas = 0.0;
    if (cut) {
      g = *cut;
      feas = 1.0;
    } else {
      Eval ev = f(E.c);
      g = ev.g;
      if (ev.f < f_best) {
        f_best = ev.f;
        x_best = E.c;
      }
      double spread = std::sqrt(std::max(0.0, g.dot(E.H * g)));
      lb = std::max(lb, ev.f - spread - opt.delta);
    }
    double gap = std::isfinite(f_best) ? f_best - lb : std::numeric_limits<double>::infinity();
    tr.record({k, f_best, gap, feas, 0.0, calls, 0});
    if (opt.stop_on_certificate && gap <= opt.eps) stop = true;
    if (!stop) {
      if (g.squaredNorm() == 0) {
        if (cut) throw ProtocolError("ellipsoid: separation oracle returned a zero cut");
        break;  // zero subgradient at a feasible center: optimal
      }
      E = ellipsoid_update(E, g);
    }
  }
  if (!x_best.size()) {
    Report r;
    r.status = Status::Infeasible;
    r.x = E.c;
    r.gap = std::nan("");
    r.iterations = tr.empty() ? 0 : tr.back().iter;
    r.oracle_calls = calls;
    r.trace = std::move(tr);
    r.message = "no feasible center seen";
    return r;
  }
  return finalize(std::move(tr), x_best, opt.eps);
}

}  // namespace optikit
