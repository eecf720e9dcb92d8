#pragma once

#include <complex>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tpdo {

/// Source position of an AST node (1-based).
struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Node of a parsed symbol expression. Variables are x1..x3 (points of the
/// torus), j1..j3 (frequency components) and |j| written abs(j).
struct ExprNode {
  enum class Kind {
    number,     // complex literal
    x_var,      // x_index
    j_var,      // j_index
    j_norm,     // abs(j)
    negate,
    add,
    sub,
    mul,
    div,
    pow,
    call,       // function applied to children[0]
  };

  Kind kind;
  SourcePos pos;
  std::complex<double> value{};
  int index = 0;        // variable component, 1-based
  std::string name;     // function name for calls
  std::vector<std::shared_ptr<const ExprNode>> children;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// A parsed symbol expression together with the parameters it was bound with.
struct SymbolSpec {
  std::string name;
  std::string source;
  std::map<std::string, double> parameters;
  ExprPtr root;

  bool depends_on_j() const;
  bool depends_on_x() const;
  /// Highest 1-based component referenced by x or j variables (0 if none).
  int max_variable_index() const;
  /// Number of nodes in the tree.
  std::size_t node_count() const;
  int division_count() const;
};

/// Parse an expression. Grammar: complex literals (3, 2.5, 1e-3, 2i, i),
/// pi, variables x1..x3 / x_1..x_3 / j1..j3 / j_1..j_3, abs(j), named
/// parameters, binary + - * / ^ (^ right associative, binds tighter than
/// unary minus), parentheses, and the functions exp, sin, cos, abs, sqrt,
/// flatexp (flatexp(t) = exp(-1/t) for t > 0, 0 otherwise).
/// Throws Error(ErrorKind::syntax) with line/column on malformed input.
SymbolSpec parse_symbol_spec(const std::string& text,
                             const std::map<std::string, double>& parameters = {},
                             const std::string& name = "custom");

/// Evaluate at point x for frequency j. Throws Error(ErrorKind::domain) on a
/// division by zero, a non-real argument to flatexp or 0 to a negative power.
std::complex<double> evaluate(const SymbolSpec& spec, std::span<const double> x,
                              std::span<const int> j);

std::string to_string(const ExprNode& node);

}  // namespace tpdo
