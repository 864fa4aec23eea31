#include "optikit/core.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace optikit {

namespace {
std::int64_t now_ns() {
  using namespace std::chrono;
  return duration_cast<nanoseconds>(steady_clock::now().time_since_epoch()).count();
}

// %.17g round-trips doubles; output is locale independent for the C locale.
void put(std::ostringstream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::IterBudget: return "IterBudget";
    case Status::Infeasible: return "Infeasible";
    case Status::Error: return "Error";
  }
  return "?";
}

void Trace::record(TraceRecord r) {
  if (!rows_.empty() && r.oracle_calls < rows_.back().oracle_calls)
    throw ProtocolError("trace: oracle counter decreased");
  if (t0_ == 0) t0_ = now_ns();
  r.wall_ns = now_ns() - t0_;
  rows_.push_back(r);
}

void Trace::reset_clock() { t0_ = now_ns(); }

std::int64_t Trace::elapsed_ns() const { return t0_ == 0 ? 0 : now_ns() - t0_; }

Report finalize(Trace trace, Vec x, double eps) {
  Report r;
  r.x = std::move(x);
  if (!trace.empty()) {
    const auto& b = trace.back();
    r.fval = b.fval;
    r.gap = b.gap;
    r.iterations = b.iter;
    r.oracle_calls = b.oracle_calls;
    r.status = (std::isfinite(b.gap) && b.gap <= eps) ? Status::Converged : Status::IterBudget;
  } else {
    r.gap = std::nan("");
    r.status = Status::IterBudget;
  }
  r.trace = std::move(trace);
  return r;
}

std::string trace_header() { return "iter,fval,gap,feas,Lk,oracle_calls,wall_ns"; }

std::string trace_csv(const Trace& t, bool with_wall) {
  std::ostringstream os;
  os << trace_header() << '\n';
  for (const auto& r : t.rows()) {
    os << r.iter << ',';
    put(os, r.fval);
    os << ',';
    put(os, r.gap);
    os << ',';
    put(os, r.feas);
    os << ',';
    put(os, r.Lk);
    os << ',' << r.oracle_calls << ',' << (with_wall ? r.wall_ns : 0) << '\n';
  }
  return os.str();
}

}  // namespace optikit
