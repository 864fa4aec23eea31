#include "optikit/autodiff.hpp"

#include <cmath>
#include <random>

namespace optikit {

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::Const: return "const";
    case OpKind::Input: return "input";
    case OpKind::Add: return "+";
    case OpKind::Sub: return "-";
    case OpKind::Mul: return "*";
    case OpKind::Div: return "/";
    case OpKind::Pow: return "pow";
    case OpKind::Neg: return "neg";
    case OpKind::Sin: return "sin";
    case OpKind::Cos: return "cos";
    case OpKind::Exp: return "exp";
    case OpKind::Log: return "log";
  }
  return "?";
}

CompGraph::CompGraph(int n_inputs) : n_(n_inputs), input_ids_(std::max(0, n_inputs), -1) {
  if (n_inputs < 0) throw InputError("graph: negative arity");
}

int CompGraph::push(Node nd) {
  const int id = size();
  if (nd.a >= id || nd.b >= id) throw InputError("graph: parent must precede its child");
  nodes_.push_back(nd);
  out_ = id;
  return id;
}

void CompGraph::set_output(int id) {
  if (id < 0 || id >= size()) throw InputError("graph: output id out of range");
  out_ = id;
}

int CompGraph::input(int i) {
  if (i < 0 || i >= n_) throw InputError("graph: input index out of range");
  if (input_ids_[i] < 0) {
    Node nd;
    nd.op = OpKind::Input;
    nd.input = i;
    int keep = out_;
    input_ids_[i] = push(nd);
    if (keep >= 0) out_ = keep;
  }
  return input_ids_[i];
}

int CompGraph::constant(double c) {
  Node nd;
  nd.op = OpKind::Const;
  nd.value = c;
  return push(nd);
}

static void need(int id, int size) {
  if (id < 0 || id >= size) throw InputError("graph: operand id out of range");
}

#define OPTIKIT_BINARY(fn, kind)            \
  int CompGraph::fn(int a, int b) {         \
    need(a, size());                        \
    need(b, size());                        \
    Node nd;                                \
    nd.op = OpKind::kind;                   \
    nd.a = a;                               \
    nd.b = b;                               \
    return push(nd);                        \
  }
#define OPTIKIT_UNARY(fn, kind)             \
  int CompGraph::fn(int a) {                \
    need(a, size());                        \
    Node nd;                                \
    nd.op = OpKind::kind;                   \
    nd.a = a;                               \
    return push(nd);                        \
  }
OPTIKIT_BINARY(add, Add)
OPTIKIT_BINARY(sub, Sub)
OPTIKIT_BINARY(mul, Mul)
OPTIKIT_BINARY(div, Div)
OPTIKIT_BINARY(pow, Pow)
OPTIKIT_UNARY(neg, Neg)
OPTIKIT_UNARY(sin, Sin)
OPTIKIT_UNARY(cos, Cos)
OPTIKIT_UNARY(exp, Exp)
OPTIKIT_UNARY(log, Log)
#undef OPTIKIT_BINARY
#undef OPTIKIT_UNARY

void CompGraph::sweep(const Vec& x, Tape& t, bool partials, OpCount* ops) const {
  if (x.size() != n_) throw InputError("graph: point has wrong dimension");
  if (out_ < 0) throw InputError("graph: empty graph");
  const int m = size();
  t.v.assign(m, 0.0);
  if (partials) {
    t.da.assign(m, 0.0);
    t.db.assign(m, 0.0);
  }
  long count = 0;
  auto fail = [](int id, const char* what) {
    throw DomainError("graph: node " + std::to_string(id) + ": " + what);
  };
  for (int i = 0; i < m; ++i) {
    const Node& nd = nodes_[i];
    const double a = nd.a >= 0 ? t.v[nd.a] : 0.0;
    const double b = nd.b >= 0 ? t.v[nd.b] : 0.0;
    double v = 0.0, da = 0.0, db = 0.0;
    switch (nd.op) {
      case OpKind::Const: v = nd.value; break;
      case OpKind::Input: v = x[nd.input]; break;
      case OpKind::Add: v = a + b; da = 1; db = 1; count += 1; break;
      case OpKind::Sub: v = a - b; da = 1; db = -1; count += 1; break;
      case OpKind::Mul: v = a * b; da = b; db = a; count += 1; break;
      case OpKind::Neg: v = -a; da = -1; count += 1; break;
      case OpKind::Div:
        if (b == 0.0) fail(i, "division by zero");
        v = a / b;
        count += 1;
        if (partials) {
          da = 1.0 / b;
          db = -v / b;
          count += 2;
        }
        break;
      case OpKind::Pow: {
        v = std::pow(a, b);
        if (!std::isfinite(v)) fail(i, "pow outside its domain");
        count += 1;
        if (partials) {
          const bool const_exp = nodes_[nd.b].op == OpKind::Const;
          da = (b == 0.0) ? 0.0 : b * std::pow(a, b - 1.0);
          if (a > 0)
            db = v * std::log(a);
          else if (!const_exp)
            fail(i, "pow with a variable exponent needs a positive base");
          count += const_exp ? 2 : 4;
        }
        break;
      }
      case OpKind::Sin:
        v = std::sin(a);
        count += 1;
        if (partials) {
          da = std::cos(a);
          count += 1;
        }
        break;
      case OpKind::Cos:
        v = std::cos(a);
        count += 1;
        if (partials) {
          da = -std::sin(a);
          count += 2;
        }
        break;
      case OpKind::Exp:
        v = std::exp(a);
        if (!std::isfinite(v)) fail(i, "exp overflow");
        da = v;
        count += 1;
        break;
      case OpKind::Log:
        if (!(a > 0)) fail(i, "log of a nonpositive value");
        v = std::log(a);
        count += 1;
        if (partials) {
          da = 1.0 / a;
          count += 1;
        }
        break;
    }
    t.v[i] = v;
    if (partials) {
      t.da[i] = da;
      t.db[i] = db;
    }
  }
  if (ops) ops->forward += count;
}

double CompGraph::evaluate(const Vec& x) const {
  Tape t;
  sweep(x, t, false, nullptr);
  return t.v[out_];
}

std::pair<double, double> CompGraph::forward(const Vec& x, const Vec& dir, OpCount* ops) const {
  if (dir.size() != n_) throw InputError("graph: direction has wrong dimension");
  Tape t;
  sweep(x, t, true, ops);
  std::vector<double> tan(size(), 0.0);
  long count = 0;
  for (int i = 0; i <= out_; ++i) {
    const Node& nd = nodes_[i];
    if (nd.op == OpKind::Input) {
      tan[i] = dir[nd.input];
    } else if (nd.op != OpKind::Const) {
      double s = t.da[i] * tan[nd.a];
      count += 1;
      if (nd.b >= 0) {
        s += t.db[i] * tan[nd.b];
        count += 2;
      }
      tan[i] = s;
    }
  }
  if (ops) ops->backward += count;
  return {t.v[out_], tan[out_]};
}

std::pair<double, Vec> CompGraph::reverse(const Vec& x, OpCount* ops) const {
  Tape t;
  sweep(x, t, true, ops);
  std::vector<double> adj(size(), 0.0);
  adj[out_] = 1.0;
  Vec g = Vec::Zero(n_);
  long count = 0;
  for (int i = out_; i >= 0; --i) {
    const Node& nd = nodes_[i];
    if (adj[i] == 0.0) continue;
    if (nd.op == OpKind::Input) {
      g[nd.input] += adj[i];
      count += 1;
    } else if (nd.op != OpKind::Const) {
      adj[nd.a] += adj[i] * t.da[i];
      count += 2;
      if (nd.b >= 0) {
        adj[nd.b] += adj[i] * t.db[i];
        count += 2;
      }
    }
  }
  if (ops) ops->backward += count;
  return {t.v[out_], g};
}

FirstOrderOracle CompGraph::oracle() const {
  FirstOrderOracle f;
  f.dim = n_;
  CompGraph self = *this;
  f.eval = [self](const Vec& x) {
    auto [v, g] = self.reverse(x);
    return Eval{v, g};
  };
  return f;
}

CompGraph random_graph(int n, int max_nodes, std::uint64_t seed) {
  if (n < 1) throw InputError("random_graph: n must be positive");
  if (max_nodes < n + 8) throw InputError("random_graph: max_nodes too small");
  std::mt19937_64 rng(seed);
  CompGraph g(n);
  std::vector<int> pool;
  for (int i = 0; i < n; ++i) pool.push_back(g.input(i));
  auto pick = [&]() {
    std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
    // favour recent nodes so the graph is deep rather than wide
    std::size_t i = d(rng), j = d(rng);
    return pool[std::max(i, j)];
  };
  // every pool value stays in [-4, 4]: inputs are drawn from [-1, 1] by callers and each
  // composition below re-bounds its result through sin, cos or a bounded ratio
  std::uniform_int_distribution<int> op(0, 7);
  while (g.size() + 6 <= max_nodes) {
    int a = pick(), b = pick(), r = -1;
    switch (op(rng)) {
      case 0: r = g.sin(g.add(a, b)); break;
      case 1: r = g.cos(g.sub(a, b)); break;
      case 2: r = g.sin(g.mul(a, b)); break;
      case 3: r = g.exp(g.sin(a)); break;  // in [1/e, e]
      case 4: r = g.log(g.add(g.constant(1.0), g.mul(a, a))); break;
      case 5: r = g.div(a, g.add(g.constant(2.0), g.sin(b))); break;
      case 6: r = g.cos(g.neg(a)); break;
      case 7: r = g.sin(g.pow(g.add(g.constant(2.0), g.cos(a)), g.sin(b))); break;
    }
    pool.push_back(r);
  }
  // sum the last few nodes so many inputs reach the output
  int out = pool.back();
  for (std::size_t k = 2; k <= 3 && k <= pool.size() && g.size() < max_nodes; ++k)
    out = g.add(out, pool[pool.size() - k]);
  g.set_output(out);
  return g;
}

}  // namespace optikit
