#pragma once

#include <memory>
#include <string>

namespace equispec {

/// Small arithmetic/boolean expression over x, y, z.
///
/// Grammar: ||, &&, comparisons (< <= > >= == !=), + -, * /, unary -, !,
/// ^ (right assoc), numbers, pi, e, and calls to sin cos tan exp log sqrt
/// cosh sinh tanh abs atan2 min max. Booleans evaluate to 0 or 1.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double x, double y, double z) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace equispec
