#include "optikit/apps.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace optikit;

namespace {
Mat gaussian(int m, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  return A;
}
}  // namespace

TEST_SUITE("apps") {
  TEST_CASE("max tree") {
    MaxTree t(5);
    CHECK(t.max() == 0.0);
    CHECK(t.argmax() == 0);
    t.update(3, 2.0);
    t.update(1, 2.0);
    CHECK(t.max() == 2.0);
    CHECK(t.argmax() == 1);
    t.update(1, -1.0);
    CHECK(t.argmax() == 3);
    CHECK(t.leaf(1) == -1.0);
    CHECK(t.update(3, 2.0) == 0);
    CHECK_THROWS(t.update(5, 1.0));
  }

  TEST_CASE("D-optimal design matches the multiplicative fixed point") {
    Mat H = gaussian(2, 5, 1);
    DoptOptions o;
    o.eps = 1e-3;
    Report r = dopt_design(H, o);
    const double ref = dopt_value(H, dopt_multiplicative(H, 100000));
    CHECK(dopt_value(H, r.x) - ref <= 1e-3);
    CHECK(dopt_value(H, r.x) - ref >= -1e-9);
    CHECK(r.x.sum() == doctest::Approx(1.0));
    // the optimum has every leverage at most m
    CHECK(dopt_audit(H, dopt_multiplicative(H, 100000)) <= 2.0 + 1e-3);
    Vec c(3);
    c << 0.0, 1.0, 2.0;
    const double th = dopt_theta(c);
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += 1.0 / (c[j] + th);
    CHECK(s == doctest::Approx(1.0));
  }

  TEST_CASE("optimal transport: duals, plans and the LP limit") {
    TransportInstance t;
    t.C.resize(3, 3);
    t.C << 0, 1, 4, 1, 0, 1, 4, 1, 0;
    t.mu.resize(3);
    t.mu << 0.5, 0.3, 0.2;
    t.nu.resize(3);
    t.nu << 0.2, 0.2, 0.6;
    t.r = 0.1;
    CHECK(ot_exact_lp(t.C, t.mu, t.nu) == doctest::Approx(0.9));
    OTResult res = entropic_ot(t);
    CHECK(res.grad_norm <= 1e-9);
    CHECK(res.lambda.sum() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((res.plan.rowwise().sum() - t.mu).norm() <= 1e-8);
    CHECK((res.plan.colwise().sum().transpose() - t.nu).norm() <= 1e-12);
    CHECK(res.value == doctest::Approx(res.primal).epsilon(1e-9));
    Mat sk = sinkhorn(t);
    CHECK(ot_primal_value(t, sk) == doctest::Approx(res.value).epsilon(1e-10));
    // the joint form at the optimal beta equals the reduced form
    Vec beta(3);
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += std::exp((-t.C(i, j) + res.lambda[i]) / t.r);
      beta[j] = t.r * std::log(t.nu[j] / s) + t.r;
    }
    CHECK(ot_joint_dual_value(t, res.lambda, beta) == doctest::Approx(res.value).epsilon(1e-12));
  }

  TEST_CASE("barycenter of identical measures is that measure") {
    Mat C(3, 3);
    C << 0, 1, 4, 1, 0, 1, 4, 1, 0;
    Vec nu(3);
    nu << 0.1, 0.3, 0.6;
    BarycenterResult b = barycenter({nu, nu}, C, 0.2, 1e-9);
    CHECK(b.consistency <= 1e-6);
    CHECK(b.mu.sum() == doctest::Approx(1.0));
    // a symmetric pair averages into a symmetric barycenter
    Vec a(3), z(3);
    a << 0.7, 0.2, 0.1;
    z << 0.1, 0.2, 0.7;
    BarycenterResult s = barycenter({a, z}, C, 0.5, 1e-9);
    CHECK(s.mu[0] == doctest::Approx(s.mu[2]).epsilon(1e-6));
  }

  TEST_CASE("minimum enclosing ball against brute force") {
    Mat X = gaussian(2, 10, 7);
    BallResult b = min_enclosing_ball(X, 1e-6);
    auto covers = [&](const Vec& c, double r) { return ((X.colwise() - c).colwise().norm().array() <= r * (1 + 1e-9)).all(); };
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) {
        Vec c = 0.5 * (X.col(i) + X.col(j));
        double r = 0.5 * (X.col(i) - X.col(j)).norm();
        if (covers(c, r)) best = std::min(best, r);
        for (int k = j + 1; k < 10; ++k) {
          Vec p = X.col(i), q = X.col(j), s = X.col(k);
          Mat M(2, 2);
          M.row(0) = 2 * (q - p).transpose();
          M.row(1) = 2 * (s - p).transpose();
          if (std::abs(M.determinant()) < 1e-12) continue;
          Vec rhs(2);
          rhs << q.squaredNorm() - p.squaredNorm(), s.squaredNorm() - p.squaredNorm();
          Vec cc = M.lu().solve(rhs);
          double rr = (cc - p).norm();
          if (covers(cc, rr)) best = std::min(best, rr);
        }
      }
    CHECK(covers(b.center, b.radius));
    CHECK(b.radius <= best * (1 + 1e-6) + 1e-12);
    CHECK(b.dual <= best * (1 + 1e-12));
  }

  TEST_CASE("l1 signal approximation stays in the ball") {
    Mat S = gaussian(6, 10, 8);
    Vec Y = S.col(2) * 0.5;
    SignalResult r = l1_signal_approx(S, Y, 1.0, 1e-8, 100000);
    CHECK(r.x.lpNorm<1>() <= 1.0 + 1e-12);
    CHECK(r.fval <= 1e-6);
    CHECK(r.mhat == doctest::Approx(S.colwise().norm().maxCoeff()));
  }

  TEST_CASE("lasso on the simplex: both regimes agree") {
    Mat A = gaussian(4, 5, 9);
    Vec b = gaussian(4, 1, 10).col(0);
    LassoOptions k;
    k.mu = 0.05;
    k.eps = 1e-6;
    k.regime = LassoRegime::KL;
    LassoResult rk = lasso_entropy_simplex(A, b, k);
    LassoOptions a = k;
    a.regime = LassoRegime::ANorm;
    LassoResult ra = lasso_entropy_simplex(A, b, a);
    CHECK(rk.x.sum() == doctest::Approx(1.0));
    CHECK(ra.x.sum() == doctest::Approx(1.0));
    CHECK(std::abs(rk.fval - ra.fval) <= 1e-5);
    CHECK(ra.predicted > 0);
  }

  TEST_CASE("two-dimensional dual subsolver") {
    Vec c(4), z(4);
    c << 0.3, -0.2, 0.5, 0.0;
    z << 0.25, 0.25, 0.25, 0.25;
    const double a = anorm_exponent(4);
    Dual2dResult r = dual2d_solve(c, a, 0.1, z);
    CHECK(r.x.sum() == doctest::Approx(1.0));
    CHECK((r.x.array() >= 0).all());
    CHECK(r.primal - r.dual <= 1e-6);
    CHECK(r.primal == doctest::Approx(dual2d_primal(c, a, 0.1, z, r.x)));
    CHECK_FALSE(r.box_active);
    CHECK(r.C == doctest::Approx(dual2d_box(c, 0.1)));
  }

  TEST_CASE("truss: two-bar optimum and rigidity") {
    TrussInstance t = truss_two_bar();
    TrussOptions o;
    o.eps = 1e-3;
    TrussResult r = truss_solve(t, o);
    CHECK(r.m[0] == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
    CHECK(r.m[1] == doctest::Approx(2.0 / 3.0).epsilon(2e-3));
    CHECK(r.compliance == doctest::Approx(9.0).epsilon(1e-3));
    CHECK(r.residual <= 1e-9);
    Mat nodes(3, 2);
    nodes << 0, 0, 1, 0, 2, 0;
    TrussInstance line = truss_from_layout(nodes, {{0, 1}, {1, 2}}, {0}, Vec::Constant(6, 0.1), 1.0);
    CHECK_THROWS_AS(truss_check_rigid(line), ModelMismatch);
  }
}
