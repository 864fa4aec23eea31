#pragma once

#include "optikit/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace optikit {

enum class OpKind { Const, Input, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log };
const char* op_name(OpKind k);

struct Node {
  OpKind op = OpKind::Const;
  int a = -1, b = -1;  // parents; always lower ids than the node
  double value = 0.0;  // Const
  int input = -1;      // Input: coordinate index
};

struct OpCount {
  long forward = 0;   // primal operations plus cached edge partials
  long backward = 0;  // multiply-adds in the adjoint sweep
};

// Static scalar graph. Nodes are stored in a topological order by construction.
class CompGraph {
 public:
  explicit CompGraph(int n_inputs = 0);

  int inputs() const { return n_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int id) const { return nodes_.at(id); }
  int output() const { return out_; }
  void set_output(int id);

  int input(int i);  // the node of x_i (0-based), created once
  int constant(double c);
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int div(int a, int b);
  int pow(int a, int b);
  int neg(int a);
  int sin(int a);
  int cos(int a);
  int exp(int a);
  int log(int a);

  double evaluate(const Vec& x) const;
  // value and <grad f(x), v> from one tangent sweep
  std::pair<double, double> forward(const Vec& x, const Vec& v, OpCount* ops = nullptr) const;
  // value and full gradient from one forward pass and one adjoint sweep
  std::pair<double, Vec> reverse(const Vec& x, OpCount* ops = nullptr) const;

  FirstOrderOracle oracle() const;  // gradients by reverse mode

 private:
  int push(Node nd);
  struct Tape {
    std::vector<double> v, da, db;
  };
  // fills node values and, when partials is set, edge partials; throws DomainError with the node id
  void sweep(const Vec& x, Tape& t, bool partials, OpCount* ops) const;

  int n_;
  std::vector<Node> nodes_;
  std::vector<int> input_ids_;
  int out_ = -1;
};

// Prefix expressions: (+ (* x1 x2) (sin x1) (exp x2)). Variables are x1..xn, numbers are
// constants; + and * take two or more operands, - takes one or two, / and pow take two,
// sin cos exp log take one. n = 0 infers the arity from the largest variable index.
CompGraph parse_expression(const std::string& text, int n = 0);

// Random graph on n inputs with at most max_nodes nodes, built from bounded compositions so
// every node stays away from the domain boundaries of log and division.
CompGraph random_graph(int n, int max_nodes, std::uint64_t seed);

}  // namespace optikit
