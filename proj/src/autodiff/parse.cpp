#include "optikit/autodiff.hpp"

#include <cctype>
#include <charconv>
#include <memory>

namespace optikit {

namespace {

struct Expr {
  std::string atom;  // empty for a list
  std::vector<std::unique_ptr<Expr>> items;
  std::size_t pos = 0;
};

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  std::unique_ptr<Expr> read() {
    skip();
    if (i_ >= s_.size()) error("unexpected end of input");
    auto e = std::make_unique<Expr>();
    e->pos = i_;
    if (s_[i_] == '(') {
      ++i_;
      for (;;) {
        skip();
        if (i_ >= s_.size()) error("missing ')'");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e->items.push_back(read());
      }
      if (e->items.empty()) error("empty list", e->pos);
    } else if (s_[i_] == ')') {
      error("unexpected ')'");
    } else {
      std::size_t start = i_;
      while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
             s_[i_] != ')')
        ++i_;
      e->atom = s_.substr(start, i_ - start);
    }
    return e;
  }

  void finish() {
    skip();
    if (i_ != s_.size()) error("trailing input");
  }

  [[noreturn]] void error(const std::string& what, std::size_t at = std::string::npos) const {
    throw InputError("expression: " + what + " at offset " + std::to_string(at == std::string::npos ? i_ : at));
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  const std::string& s_;
  std::size_t i_ = 0;
};

bool variable_index(const std::string& a, int& idx) {
  if (a.size() < 2 || a[0] != 'x') return false;
  int v = 0;
  auto [p, ec] = std::from_chars(a.data() + 1, a.data() + a.size(), v);
  if (ec != std::errc() || p != a.data() + a.size() || v < 1) return false;
  idx = v;
  return true;
}

bool number(const std::string& a, double& v) {
  try {
    std::size_t used = 0;
    v = std::stod(a, &used);
    return used == a.size();
  } catch (const std::exception&) {
    return false;
  }
}

int max_index(const Expr& e) {
  int m = 0, i = 0;
  if (!e.atom.empty() && variable_index(e.atom, i)) m = i;
  for (const auto& c : e.items) m = std::max(m, max_index(*c));
  return m;
}

int build(const Expr& e, CompGraph& g, const Reader& rd) {
  if (!e.atom.empty()) {
    int i = 0;
    double v = 0;
    if (variable_index(e.atom, i)) {
      if (i > g.inputs()) rd.error("variable " + e.atom + " exceeds the declared arity", e.pos);
      return g.input(i - 1);
    }
    if (number(e.atom, v)) return g.constant(v);
    rd.error("unknown atom '" + e.atom + "'", e.pos);
  }
  const Expr& head = *e.items[0];
  if (head.atom.empty()) rd.error("operator expected", head.pos);
  const std::string& op = head.atom;
  const std::size_t k = e.items.size() - 1;
  std::vector<int> args;
  for (std::size_t j = 1; j < e.items.size(); ++j) args.push_back(build(*e.items[j], g, rd));
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (k < lo || k > hi) rd.error("wrong number of operands for '" + op + "'", e.pos);
  };
  if (op == "+" || op == "*") {
    arity(2, static_cast<std::size_t>(-1));
    int r = args[0];
    for (std::size_t j = 1; j < args.size(); ++j) r = op == "+" ? g.add(r, args[j]) : g.mul(r, args[j]);
    return r;
  }
  if (op == "-") {
    arity(1, 2);
    return k == 1 ? g.neg(args[0]) : g.sub(args[0], args[1]);
  }
  if (op == "/") {
    arity(2, 2);
    return g.div(args[0], args[1]);
  }
  if (op == "pow" || op == "^") {
    arity(2, 2);
    return g.pow(args[0], args[1]);
  }
  arity(1, 1);
  if (op == "sin") return g.sin(args[0]);
  if (op == "cos") return g.cos(args[0]);
  if (op == "exp") return g.exp(args[0]);
  if (op == "log") return g.log(args[0]);
  rd.error("unknown operator '" + op + "'", head.pos);
}

}  // namespace

CompGraph parse_expression(const std::string& text, int n) {
  Reader rd(text);
  auto e = rd.read();
  rd.finish();
  if (n < 0) throw InputError("expression: negative arity");
  int arity = n > 0 ? n : max_index(*e);
  CompGraph g(arity);
  g.set_output(build(*e, g, rd));
  return g;
}

}  // namespace optikit
