#include "optikit/autodiff.hpp"
#include "optikit/cli.hpp"

#include <json.hpp>

#include <fstream>
#include <random>
#include <sstream>

namespace optikit::cli {

using nlohmann::json;

namespace {

Vec to_vec(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("problem: ") + what + " must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string("problem: ") + what + " must hold numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  if (!v.allFinite()) throw InputError(std::string("problem: ") + what + " must be finite");
  return v;
}

Mat to_mat(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InputError(std::string("problem: ") + what + " must be a nonempty array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Mat A(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw InputError(std::string("problem: ragged matrix ") + what);
    A.row(static_cast<Eigen::Index>(i)) = to_vec(j[i], what).transpose();
  }
  return A;
}

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_number()) throw InputError(std::string("problem: ") + key + " must be a number");
  return j[key].get<double>();
}

int need_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw InputError(std::string("problem: integer ") + key + " required");
  int v = j[key].get<int>();
  if (v < 1) throw InputError(std::string("problem: ") + key + " must be positive");
  return v;
}

}  // namespace

FeasibleSet parse_set(const std::string& spec, int n) {
  auto radius = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double r = std::stod(s, &used);
      if (used != s.size() || !(r > 0)) throw InputError("");
      return r;
    } catch (const std::exception&) {
      throw InputError("bad radius in set spec: " + spec);
    }
  };
  if (spec.empty() || spec == "whole") return FeasibleSet::whole();
  if (spec == "simplex") return FeasibleSet::simplex();
  if (spec == "box") return FeasibleSet::box(Vec::Zero(n), Vec::Ones(n));
  if (spec == "l1") return FeasibleSet::l1ball(1.0);
  if (spec == "ball") return FeasibleSet::ball(1.0);
  if (spec.rfind("l1:", 0) == 0) return FeasibleSet::l1ball(radius(spec.substr(3)));
  if (spec.rfind("ball:", 0) == 0) return FeasibleSet::ball(radius(spec.substr(5)));
  throw InputError("unknown set spec: " + spec);
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("problem: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InputError("problem: an object with a string \"type\" is required");
  Problem p;
  p.type = j["type"].get<std::string>();
  try {
    if (p.type == "quadratic") {
      Mat A = to_mat(j.at("A"), "A");
      Vec b = to_vec(j.at("b"), "b");
      if (A.rows() != A.cols() || A.rows() != b.size()) throw InputError("problem: A must be square and match b");
      if (!A.isApprox(A.transpose(), 1e-12)) throw InputError("problem: A must be symmetric");
      QuadraticProblem q = QuadraticProblem::make(A, b);
      p.f = q.oracle();
      if (q.mu > 0) p.quad = q;
    } else if (p.type == "least_squares") {
      Mat A = to_mat(j.at("A"), "A");
      Vec b = to_vec(j.at("b"), "b");
      if (A.rows() != b.size()) throw InputError("problem: A rows must match b");
      p.f = least_squares_oracle(A, b);
    } else if (p.type == "distance") {
      p.f = distance_oracle(to_vec(j.at("c"), "c"));
    } else if (p.type == "l1norm") {
      p.f = l1norm_oracle(need_int(j, "n"));
    } else if (p.type == "linear") {
      p.f = linear_oracle(to_vec(j.at("c"), "c"));
    } else if (p.type == "logsumexp") {
      p.f = logsumexp_oracle(need_int(j, "n"));
    } else if (p.type == "expression") {
      if (!j.contains("text") || !j["text"].is_string()) throw InputError("problem: expression needs \"text\"");
      int n = j.contains("n") ? need_int(j, "n") : 0;
      p.f = parse_expression(j["text"].get<std::string>(), n).oracle();
    } else {
      throw InputError("problem: unknown type '" + p.type + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("problem: missing or mistyped field: ") + e.what());
  }
  const int n = p.f.dim;
  if (n < 1) throw InputError("problem: dimension must be positive");
  if (j.contains("set")) {
    if (!j["set"].is_string()) throw InputError("problem: set must be a string");
    p.set_spec = j["set"].get<std::string>();
  }
  p.set = parse_set(p.set_spec, n);
  // a built-in optimum is unconstrained; constrained problems must state theirs
  if (p.set.kind != SetKind::Whole && !j.contains("fstar") && !j.contains("xstar")) p.f.opt.reset();
  p.x0 = j.contains("x0") ? to_vec(j["x0"], "x0") : Vec(Vec::Zero(n));
  if (p.x0.size() != n) throw InputError("problem: x0 dimension");
  p.R = opt_number(j, "R");
  p.M = opt_number(j, "M");
  p.L = opt_number(j, "L");
  p.mu = opt_number(j, "mu");
  p.fstar = opt_number(j, "fstar");
  if (p.M) p.f.meta.M = p.M;
  if (p.L) p.f.meta.L = p.L;
  if (p.mu) p.f.meta.mu = p.mu;
  if (j.contains("xstar")) {
    Vec xs = to_vec(j["xstar"], "xstar");
    if (xs.size() != n) throw InputError("problem: xstar dimension");
    p.f.opt = Optimum{xs, p.f.value(xs)};
  }
  if (p.fstar) {
    if (p.f.opt)
      p.f.opt->f = *p.fstar;
    else
      p.f.opt = Optimum{Vec(), *p.fstar};
  }
  if (p.f.opt && !p.fstar) p.fstar = p.f.opt->f;
  if (!p.L && p.f.meta.L) p.L = p.f.meta.L;
  if (!p.M && p.f.meta.M) p.M = p.f.meta.M;
  if (!p.mu && p.f.meta.mu) p.mu = p.f.meta.mu;
  if (j.contains("constraints")) {
    if (!j["constraints"].is_array()) throw InputError("problem: constraints must be an array");
    for (const auto& c : j["constraints"]) {
      if (!c.is_object() || !c.contains("a")) throw InputError("problem: constraint needs \"a\"");
      LinearConstraint lc{to_vec(c["a"], "constraint a"), c.contains("b") ? opt_number(c, "b").value() : 0.0};
      if (lc.a.size() != n) throw InputError("problem: constraint dimension");
      p.constraints.push_back(std::move(lc));
    }
  }
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

Problem generate_problem(const std::string& spec, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto dim = [&](std::size_t i) {
    if (i >= parts.size()) throw InputError("generator: missing dimension in " + spec);
    try {
      int v = std::stoi(parts[i]);
      if (v < 1 || v > 5000) throw InputError("");
      return v;
    } catch (const std::exception&) {
      throw InputError("generator: bad dimension in " + spec);
    }
  };
  if (parts.size() < 2 || parts[0] != "gen") throw InputError("generator: expected gen:<kind>:<dims>");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Problem p;
  if (parts[1] == "quadratic") {
    const int n = dim(2);
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = nd(rng);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ();
    Vec ev(n);
    for (int i = 0; i < n; ++i) ev[i] = n == 1 ? 1.0 : 0.01 + 0.99 * i / (n - 1.0);
    Mat A = Q * ev.asDiagonal() * Q.transpose();
    A = 0.5 * (A + A.transpose()).eval();
    Vec b(n);
    for (int i = 0; i < n; ++i) b[i] = nd(rng);
    QuadraticProblem q = QuadraticProblem::make(A, b);
    p.type = "quadratic";
    p.f = q.oracle();
    p.quad = q;
  } else if (parts[1] == "lsq") {
    const int m = dim(2), n = dim(3);
    Mat A(m, n);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = nd(rng) / std::sqrt(static_cast<double>(m));
      b[i] = nd(rng);
    }
    p.type = "least_squares";
    p.f = least_squares_oracle(A, b);
  } else {
    throw InputError("generator: unknown kind in " + spec);
  }
  p.x0 = Vec::Zero(p.f.dim);
  if (p.f.opt) p.fstar = p.f.opt->f;
  p.L = p.f.meta.L;
  p.mu = p.f.meta.mu;
  if (p.f.opt) p.R = (p.x0 - p.f.opt->x).norm();
  return p;
}

}  // namespace optikit::cli
