#include "equispec/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "equispec/error.hpp"

namespace equispec {

struct Expression::Node {
  enum class Op { Const, Var, Neg, Not, Bin, Call } op = Op::Const;
  double value = 0.0;
  int var = 0;
  std::string name;  // binary operator or function name
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = parse_or();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidInput("expression \"" + s_ + "\": " + msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static NodePtr bin(const std::string& op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Bin;
    n->name = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr parse_or() {
    NodePtr l = parse_and();
    while (accept("||")) l = bin("||", l, parse_and());
    return l;
  }

  NodePtr parse_and() {
    NodePtr l = parse_cmp();
    while (accept("&&")) l = bin("&&", l, parse_cmp());
    return l;
  }

  NodePtr parse_cmp() {
    NodePtr l = parse_add();
    for (const char* op : {"<=", ">=", "==", "!=", "<", ">"}) {
      if (accept(op)) return bin(op, l, parse_add());
    }
    return l;
  }

  NodePtr parse_add() {
    NodePtr l = parse_mul();
    for (;;) {
      if (accept("+")) l = bin("+", l, parse_mul());
      else if (accept("-")) l = bin("-", l, parse_mul());
      else return l;
    }
  }

  NodePtr parse_mul() {
    NodePtr l = parse_unary();
    for (;;) {
      if (accept("*")) l = bin("*", l, parse_unary());
      else if (accept("/")) l = bin("/", l, parse_unary());
      else return l;
    }
  }

  NodePtr parse_unary() {
    skip();
    if (accept("-")) {
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Neg;
      n->args = {parse_unary()};
      return n;
    }
    if (accept("+")) return parse_unary();
    if (pos_ < s_.size() && s_[pos_] == '!' && s_.compare(pos_, 2, "!=") != 0) {
      ++pos_;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Not;
      n->args = {parse_unary()};
      return n;
    }
    return parse_pow();
  }

  NodePtr parse_pow() {
    NodePtr base = parse_atom();
    if (accept("^")) return bin("^", base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = parse_or();
      if (!accept(")")) fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (accept("(")) {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Call;
        n->name = id;
        if (!accept(")")) {
          do n->args.push_back(parse_or());
          while (accept(","));
          if (!accept(")")) fail("missing ')' after arguments");
        }
        static const std::vector<std::pair<std::string, size_t>> known = {
            {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1}, {"sqrt", 1},
            {"cosh", 1}, {"sinh", 1}, {"tanh", 1}, {"abs", 1}, {"atan2", 2}, {"min", 2}, {"max", 2}};
        bool ok = false;
        for (const auto& [fn, arity] : known)
          if (fn == id) {
            if (arity != n->args.size()) fail("wrong argument count for " + id);
            ok = true;
          }
        if (!ok) fail("unknown function " + id);
        return n;
      }
      auto n = std::make_shared<Node>();
      if (id == "x" || id == "y" || id == "z") {
        n->op = Node::Op::Var;
        n->var = id[0] - 'x';
      } else if (id == "pi") {
        n->value = std::numbers::pi;
      } else if (id == "e") {
        n->value = std::numbers::e;
      } else {
        fail("unknown identifier " + id);
      }
      return n;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

double eval_node(const Node& n, const double* xyz) {
  switch (n.op) {
    case Node::Op::Const: return n.value;
    case Node::Op::Var: return xyz[n.var];
    case Node::Op::Neg: return -eval_node(*n.args[0], xyz);
    case Node::Op::Not: return eval_node(*n.args[0], xyz) == 0.0 ? 1.0 : 0.0;
    case Node::Op::Bin: {
      const double a = eval_node(*n.args[0], xyz);
      // short-circuit
      if (n.name == "&&") return (a != 0.0 && eval_node(*n.args[1], xyz) != 0.0) ? 1.0 : 0.0;
      if (n.name == "||") return (a != 0.0 || eval_node(*n.args[1], xyz) != 0.0) ? 1.0 : 0.0;
      const double b = eval_node(*n.args[1], xyz);
      switch (n.name[0]) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
        case '<': return (n.name == "<=" ? a <= b : a < b) ? 1.0 : 0.0;
        case '>': return (n.name == ">=" ? a >= b : a > b) ? 1.0 : 0.0;
        case '=': return a == b ? 1.0 : 0.0;
        case '!': return a != b ? 1.0 : 0.0;
      }
      return 0.0;
    }
    case Node::Op::Call: {
      const double a = eval_node(*n.args[0], xyz);
      const std::string& f = n.name;
      if (f == "sin") return std::sin(a);
      if (f == "cos") return std::cos(a);
      if (f == "tan") return std::tan(a);
      if (f == "exp") return std::exp(a);
      if (f == "log") return std::log(a);
      if (f == "sqrt") return std::sqrt(a);
      if (f == "cosh") return std::cosh(a);
      if (f == "sinh") return std::sinh(a);
      if (f == "tanh") return std::tanh(a);
      if (f == "abs") return std::abs(a);
      const double b = eval_node(*n.args[1], xyz);
      if (f == "atan2") return std::atan2(a, b);
      if (f == "min") return std::min(a, b);
      if (f == "max") return std::max(a, b);
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::eval(double x, double y, double z) const {
  const double xyz[3] = {x, y, z};
  return eval_node(*root_, xyz);
}

}  // namespace equispec
