#include "optikit/cli.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace optikit::cli {

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names{"subgradient", "ellipsoid", "gd",      "accelerated",
                                              "fw",          "meta",      "restart", "gap"};
  return names;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& theorem, const char* key) {
  auto it = p.find(key);
  if (it == p.end()) throw InputError("verify: theorem " + theorem + " needs parameter " + key);
  return it->second;
}

// slack for round-off in the recorded values
double slack(double bound) { return 1e-12 * std::max(1.0, std::abs(bound)); }

}  // namespace

VerifyResult verify_bounds(const std::vector<TraceRecord>& rows, const std::string& th,
                           const std::map<std::string, double>& p) {
  if (rows.empty()) throw InputError("verify: empty trace");
  VerifyResult v;
  v.theorem = th;
  const double inf = std::numeric_limits<double>::infinity();
  auto push = [&](const TraceRecord& r, double lhs, double bound) {
    const bool ok = std::isfinite(lhs) ? lhs <= bound + slack(bound) : false;
    v.iter.push_back(r.iter);
    v.lhs.push_back(lhs);
    v.bound.push_back(bound);
    v.ok.push_back(ok);
    if (!ok && v.first_violation < 0) v.first_violation = static_cast<long>(v.ok.size()) - 1;
  };
  // rate bound c / rate(k) on f_k - fstar; rows the rate leaves unbounded always pass
  auto rate = [&](double fstar, auto bound_of) {
    for (const auto& r : rows) {
      const double b = bound_of(static_cast<double>(r.iter));
      push(r, r.fval - fstar, std::isfinite(b) && b >= 0 ? b : inf);
    }
  };

  if (th == "subgradient") {
    const double M = param(p, th, "M"), R = param(p, th, "R");
    const auto& r = rows.back();
    // rows hold x_0 .. x_{N-1}; the gap column bounds f(average) - f*
    push(r, r.gap, M * R / std::sqrt(static_cast<double>(r.iter + 1)));
  } else if (th == "ellipsoid") {
    const double n = param(p, th, "n"), M = param(p, th, "M"), R = param(p, th, "R"), eps = param(p, th, "eps");
    const double cap = std::ceil(2.0 * n * n * std::log(M * R / eps));
    bool reached = false;
    for (const auto& r : rows) {
      if (reached) {
        push(r, 0.0, cap);
        continue;
      }
      push(r, static_cast<double>(r.oracle_calls), cap);
      reached = std::isfinite(r.gap) && r.gap <= eps;
    }
    if (!reached && v.first_violation < 0) v.first_violation = static_cast<long>(rows.size()) - 1;
  } else if (th == "gd") {
    const double L = param(p, th, "L"), R = param(p, th, "R"), fs = param(p, th, "fstar");
    rate(fs, [&](double k) { return k > 0 ? L * R * R / (4.0 * k) : inf; });
  } else if (th == "accelerated") {
    const double L = param(p, th, "L"), R2 = param(p, th, "R2"), fs = param(p, th, "fstar");
    rate(fs, [&](double k) { return 8.0 * L * R2 / ((k + 1.0) * (k + 1.0)); });
  } else if (th == "fw") {
    const double L = param(p, th, "L"), R = param(p, th, "R"), fs = param(p, th, "fstar");
    rate(fs, [&](double k) { return k > 0 ? 2.0 * L * R * R / (k + 2.0) : inf; });
  } else if (th == "meta") {
    const double H = param(p, th, "H"), R = param(p, th, "R"), fs = param(p, th, "fstar");
    rate(fs, [&](double k) { return k > 0 ? 4.0 * H * R * R / (k * k) : inf; });
  } else if (th == "restart") {
    const double fs = param(p, th, "fstar");
    for (const auto& r : rows)
      if (std::isfinite(r.gap)) push(r, r.fval - fs, r.gap);
    if (v.ok.empty()) throw InputError("verify: restart trace has no finite gap column");
  } else if (th == "gap") {
    const double eps = param(p, th, "eps");
    push(rows.back(), rows.back().gap, eps);
  } else {
    throw InputError("verify: unknown theorem id '" + th + "'");
  }
  return v;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("trace: empty file");
  if (line != trace_header()) throw InputError("trace: unexpected header '" + line + "'");
  std::vector<TraceRecord> rows;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 7) throw InputError("trace: line " + std::to_string(lineno) + " needs 7 fields");
    try {
      TraceRecord r;
      r.iter = std::stol(f[0]);
      r.fval = std::stod(f[1]);
      r.gap = std::stod(f[2]);
      r.feas = std::stod(f[3]);
      r.Lk = std::stod(f[4]);
      r.oracle_calls = std::stol(f[5]);
      r.wall_ns = std::stoll(f[6]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw InputError("trace: bad number on line " + std::to_string(lineno));
    }
  }
  return rows;
}

}  // namespace optikit::cli
