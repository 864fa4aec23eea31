#include "optikit/apps.hpp"
#include "optikit/cli.hpp"
#include "optikit/cutting_plane.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace optikit::cli {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

Vec jvec(const json& j) {
  if (!j.is_array()) throw InputError("instance: expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Mat jmat(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("instance: expected a nonempty array of rows");
  Mat A(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw InputError("instance: ragged matrix");
    A.row(static_cast<Eigen::Index>(i)) = jvec(j[i]).transpose();
  }
  return A;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec_str(const Vec& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
  return s + "]";
}

void write_trace(const std::string& path, const Trace& t) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file: " + path);
  out << trace_csv(t);
}

void print_report(const Report& r) {
  std::cout << "status: " << status_name(r.status) << '\n'
            << "fval: " << num(r.fval) << '\n'
            << "gap: " << num(r.gap) << '\n'
            << "iterations: " << r.iterations << '\n'
            << "oracle_calls: " << r.oracle_calls << '\n';
  if (!r.message.empty()) std::cout << "message: " << r.message << '\n';
}

int cmd_run(const RunConfig& cfg) {
  Problem p = cfg.problem.rfind("gen:", 0) == 0 ? generate_problem(cfg.problem, cfg.seed) : load_problem(cfg.problem);
  RunOutcome o = run_method(cfg, p);
  write_trace(cfg.out, o.report.trace);
  print_report(o.report);
  std::cout << "final_gap: " << num(o.final_gap) << '\n';
  return o.code;
}

int cmd_verify(const std::string& trace_path, const std::string& theorem, const std::vector<std::string>& kv) {
  std::ifstream in(trace_path);
  if (!in) throw InputError("cannot open trace file: " + trace_path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::map<std::string, double> params;
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("verify: parameter '" + s + "' is not key=value");
    try {
      params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("verify: bad number in '" + s + "'");
    }
  }
  VerifyResult v = verify_bounds(parse_trace_csv(ss.str()), theorem, params);
  std::cout << "theorem: " << v.theorem << '\n' << "rows: " << v.ok.size() << '\n';
  if (v.pass()) {
    std::cout << "result: PASS\n";
    return kExitConverged;
  }
  const auto i = static_cast<std::size_t>(v.first_violation);
  std::cout << "result: FAIL\n"
            << "first_violation: " << v.first_violation << " (iter " << v.iter[i] << ", lhs " << num(v.lhs[i])
            << ", bound " << num(v.bound[i]) << ")\n";
  return kExitFailure;
}

int cmd_lp(const std::string& instance, double eps) {
  LPInstance lp;
  if (instance.rfind("klee-minty:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(instance.substr(11));
    } catch (const std::exception&) {
      throw InputError("lp: bad Klee-Minty dimension");
    }
    if (n < 1 || n > 12) throw InputError("lp: Klee-Minty dimension must be in 1..12");
    lp = klee_minty(n);
  } else {
    json j = read_json(instance);
    try {
      lp.A = jmat(j.at("A"));
      lp.b = jvec(j.at("b"));
      if (j.contains("c")) lp.c = jvec(j["c"]);
      if (j.contains("R")) lp.R = j["R"].get<double>();
    } catch (const json::exception& e) {
      throw InputError(std::string("lp: missing or mistyped field: ") + e.what());
    }
    if (lp.A.rows() != lp.b.size() || (lp.c.size() && lp.c.size() != lp.A.cols()))
      throw InputError("lp: dimension mismatch");
  }
  LPResult r = lp_solve(lp, eps);
  std::cout << "status: " << status_name(r.status) << '\n'
            << "value: " << num(r.value) << '\n'
            << "x: " << vec_str(r.x) << '\n'
            << "ellipsoid_steps: " << r.ellipsoid_steps << '\n';
  if (r.recovery) {
    std::cout << "exact:";
    for (const auto& s : r.recovery->exact) std::cout << ' ' << s;
    std::cout << '\n';
  }
  return exit_code(r.status);
}

TrussInstance load_truss(const std::string& spec) {
  if (spec == "two-bar") return truss_two_bar();
  if (spec.rfind("grid:", 0) == 0) {
    int c = 0, r = 0;
    if (std::sscanf(spec.c_str() + 5, "%d:%d", &c, &r) != 2 || c < 2 || r < 2)
      throw InputError("truss: grid spec is grid:<cols>:<rows>");
    return truss_grid(c, r);
  }
  json j = read_json(spec);
  TrussInstance t;
  try {
    t.dofs = j.at("dofs").get<int>();
    t.f = jvec(j.at("f"));
    t.M = j.contains("M") ? j["M"].get<double>() : 1.0;
    for (const auto& bar : j.at("a")) {
      SparseVec a;
      for (const auto& e : bar) a.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
      t.a.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("truss: missing or mistyped field: ") + e.what());
  }
  if (t.f.size() != t.dofs) throw InputError("truss: load dimension");
  for (const auto& a : t.a)
    for (const auto& [i, v] : a)
      if (i < 0 || i >= t.dofs) throw InputError("truss: coordinate out of range");
  return t;
}

int cmd_app(const std::string& app, const std::string& instance, std::optional<double> eps_in, const std::string& out) {
  auto field = [](const json& j, const char* k) -> const json& {
    if (!j.contains(k)) throw InputError(std::string("instance: missing field ") + k);
    return j[k];
  };
  Report rep;
  if (app == "truss") {
    TrussOptions o;
    if (eps_in) o.eps = *eps_in;
    TrussResult r = truss_solve(load_truss(instance), o);
    std::cout << "mass: " << vec_str(r.m) << '\n'
              << "compliance: " << num(r.compliance) << '\n'
              << "primal: " << num(r.primal) << '\n'
              << "dual: " << num(r.dual) << '\n'
              << "residual: " << num(r.residual) << '\n';
    rep = std::move(r.report);
  } else {
    json j = read_json(instance);
    try {
      if (app == "dopt") {
        DoptOptions o;
        if (eps_in) o.eps = *eps_in;
        const Mat H = jmat(field(j, "H"));
        rep = dopt_design(H, o);
        std::cout << "design: " << vec_str(rep.x) << '\n' << "audit: " << num(dopt_audit(H, rep.x)) << '\n';
      } else if (app == "ot") {
        TransportInstance t{jmat(field(j, "C")), jvec(field(j, "mu")), jvec(field(j, "nu")),
                            j.contains("r") ? j["r"].get<double>() : 1.0};
        OTResult r = entropic_ot(t, eps_in.value_or(1e-10));
        std::cout << "value: " << num(r.value) << '\n' << "primal: " << num(r.primal) << '\n';
        rep = std::move(r.report);
      } else if (app == "barycenter") {
        std::vector<Vec> nus;
        for (const auto& v : field(j, "nus")) nus.push_back(jvec(v));
        BarycenterResult r = barycenter(nus, jmat(field(j, "C")), j.contains("r") ? j["r"].get<double>() : 1.0,
                                        eps_in.value_or(1e-8));
        std::cout << "mu: " << vec_str(r.mu) << '\n'
                  << "objective: " << num(r.objective) << '\n'
                  << "consistency: " << num(r.consistency) << '\n';
        rep = std::move(r.report);
      } else if (app == "meb") {
        // points.json: {"points": [[x, y, ...], ...]}, one point per row
        BallResult r = min_enclosing_ball(jmat(field(j, "points")).transpose(), eps_in.value_or(1e-6));
        std::cout << "center: " << vec_str(r.center) << '\n' << "radius: " << num(r.radius) << '\n';
        rep = std::move(r.report);
      } else if (app == "signal") {
        SignalResult r = l1_signal_approx(jmat(field(j, "S")), jvec(field(j, "Y")),
                                          j.contains("r") ? j["r"].get<double>() : 1.0, eps_in.value_or(1e-4),
                                          j.contains("N") ? j["N"].get<long>() : 10000);
        std::cout << "x: " << vec_str(r.x) << '\n';
        rep = std::move(r.report);
      } else if (app == "lasso") {
        LassoOptions o;
        if (eps_in) o.eps = *eps_in;
        if (j.contains("mu")) o.mu = j["mu"].get<double>();
        const Mat A = jmat(field(j, "A"));
        LassoResult r = lasso_entropy_simplex(A, jvec(field(j, "b")), o);
        std::cout << "x: " << vec_str(r.x) << '\n'
                  << "regime: " << (r.regime == LassoRegime::KL ? "kl" : "anorm") << '\n';
        rep = std::move(r.report);
      } else {
        throw InputError("app: unknown application '" + app + "'");
      }
    } catch (const json::exception& e) {
      throw InputError(std::string("instance: mistyped field: ") + e.what());
    }
  }
  write_trace(out, rep.trace);
  print_report(rep);
  return exit_code(rep.status);
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"optikit: first-order convex optimization benchmarks"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* run = app.add_subcommand("run", "run a method on a problem file and write its trace");
  run->add_option("--method", cfg.method, "method name (see 'optikit methods')")->required();
  run->add_option("--problem", cfg.problem, "problem JSON, or gen:quadratic:<n> / gen:lsq:<m>:<n>")->required();
  run->add_option("--eps", cfg.eps, "target accuracy");
  run->add_option("--N", cfg.N, "iteration budget");
  run->add_option("--geometry", cfg.geometry, "euclid, entropy or anorm");
  run->add_option("--L0", cfg.L0, "initial or fixed Lipschitz estimate");
  run->add_option("--mu", cfg.mu, "strong convexity");
  run->add_option("--seed", cfg.seed, "generator seed");
  run->add_option("--out", cfg.out, "trace CSV path");
  run->add_option("--policy", cfg.policy, "subgradient step policy");
  run->add_option("--set", cfg.set, "feasible set override");

  std::string trace_path, theorem;
  std::vector<std::string> params;
  auto* verify = app.add_subcommand("verify", "check a trace against a convergence bound");
  verify->add_option("--trace", trace_path)->required();
  verify->add_option("--theorem", theorem)->required();
  verify->add_option("--param", params, "key=value, repeatable");

  std::string lp_instance;
  double lp_eps = 1e-6;
  auto* lp = app.add_subcommand("lp", "solve an LP with the ellipsoid pipeline");
  lp->add_option("--instance", lp_instance, "JSON file with A, b, c, R, or klee-minty:<n>")->required();
  lp->add_option("--eps", lp_eps);

  std::string app_name, app_instance, app_out;
  std::optional<double> app_eps;
  auto* apps = app.add_subcommand("app", "run an application solver");
  apps->add_option("name", app_name, "dopt, ot, barycenter, truss, meb, signal or lasso")->required();
  apps->add_option("--instance", app_instance)->required();
  apps->add_option("--eps", app_eps);
  apps->add_option("--out", app_out, "trace CSV path");

  auto* methods = app.add_subcommand("methods", "list method and theorem ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  try {
    if (run->parsed()) return cmd_run(cfg);
    if (verify->parsed()) return cmd_verify(trace_path, theorem, params);
    if (lp->parsed()) return cmd_lp(lp_instance, lp_eps);
    if (apps->parsed()) return cmd_app(app_name, app_instance, app_eps, app_out);
    if (methods->parsed()) {
      std::cout << "methods:";
      for (const auto& m : method_names()) std::cout << ' ' << m;
      std::cout << "\ntheorems:";
      for (const auto& t : theorem_names()) std::cout << ' ' << t;
      std::cout << '\n';
      return kExitConverged;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInput;
}

}  // namespace optikit::cli
