#include "tpdo/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

using cplx = std::complex<double>;

const std::set<std::string> kFunctions = {"exp", "sin", "cos", "abs", "sqrt", "flatexp"};

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, end };
  Kind kind;
  std::string text;
  double number = 0.0;
  bool imaginary = false;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const SourcePos start{line_, col_};
      if (at_end()) {
        out.push_back({Token::Kind::end, "", 0.0, false, start});
        return out;
      }
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        out.push_back(number(start));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) id += advance();
        out.push_back({Token::Kind::ident, id, 0.0, false, start});
      } else if (c == '(') {
        advance();
        out.push_back({Token::Kind::lparen, "(", 0.0, false, start});
      } else if (c == ')') {
        advance();
        out.push_back({Token::Kind::rparen, ")", 0.0, false, start});
      } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
        advance();
        out.push_back({Token::Kind::op, std::string(1, c), 0.0, false, start});
      } else {
        fail(start, std::string("unexpected character '") + c + "'");
      }
    }
  }

  [[noreturn]] static void fail(SourcePos pos, const std::string& msg) {
    throw Error(ErrorKind::syntax, "syntax error at line " + std::to_string(pos.line) + ", column " +
                                       std::to_string(pos.column) + ": " + msg);
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }
  char advance() {
    const char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  Token number(SourcePos start) {
    std::string text;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) text += advance();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      const char sign = peek(1);
      const bool signed_exp = (sign == '+' || sign == '-') && std::isdigit(static_cast<unsigned char>(peek(2)));
      if (std::isdigit(static_cast<unsigned char>(sign)) || signed_exp) {
        text += advance();
        if (signed_exp) text += advance();
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
      }
    }
    double v = 0.0;
    std::istringstream is(text);
    is >> v;
    if (!is || !is.eof()) fail(start, "malformed number '" + text + "'");
    Token t{Token::Kind::number, text, v, false, start};
    // 2i is an imaginary literal; 2in would be an identifier glued to a number.
    if (!at_end() && peek() == 'i' && !std::isalnum(static_cast<unsigned char>(peek(1))) && peek(1) != '_') {
      advance();
      t.imaginary = true;
    }
    return t;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::map<std::string, double>& params)
      : toks_(std::move(toks)), params_(params) {}

  ExprPtr parse() {
    auto e = expr();
    if (cur().kind != Token::Kind::end) Lexer::fail(cur().pos, "unexpected '" + cur().text + "'");
    return e;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool is_op(const char* op) const { return cur().kind == Token::Kind::op && cur().text == op; }

  static ExprPtr make(ExprNode::Kind kind, SourcePos pos, std::vector<ExprPtr> children = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->pos = pos;
    n->children = std::move(children);
    return n;
  }

  ExprPtr expr() {
    auto lhs = term();
    while (is_op("+") || is_op("-")) {
      const auto pos = cur().pos;
      const auto kind = cur().text == "+" ? ExprNode::Kind::add : ExprNode::Kind::sub;
      ++i_;
      lhs = make(kind, pos, {lhs, term()});
    }
    return lhs;
  }

  ExprPtr term() {
    auto lhs = unary();
    while (is_op("*") || is_op("/")) {
      const auto pos = cur().pos;
      const auto kind = cur().text == "*" ? ExprNode::Kind::mul : ExprNode::Kind::div;
      ++i_;
      lhs = make(kind, pos, {lhs, unary()});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_op("-")) {
      const auto pos = cur().pos;
      ++i_;
      return make(ExprNode::Kind::negate, pos, {unary()});
    }
    if (is_op("+")) {
      ++i_;
      return unary();
    }
    return power();
  }

  ExprPtr power() {
    auto base = primary();
    if (is_op("^")) {
      const auto pos = cur().pos;
      ++i_;
      return make(ExprNode::Kind::pow, pos, {base, unary()});
    }
    return base;
  }

  static bool parse_component(const std::string& id, char var, int& index) {
    std::string rest;
    if (id.size() >= 2 && id[0] == var) {
      rest = id.substr(1);
      if (!rest.empty() && rest[0] == '_') rest = rest.substr(1);
    }
    if (rest.size() != 1 || rest[0] < '1' || rest[0] > '3') return false;
    index = rest[0] - '0';
    return true;
  }

  ExprPtr primary() {
    const Token t = cur();
    switch (t.kind) {
      case Token::Kind::number: {
        ++i_;
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::number;
        n->pos = t.pos;
        n->value = t.imaginary ? cplx{0.0, t.number} : cplx{t.number, 0.0};
        return n;
      }
      case Token::Kind::lparen: {
        ++i_;
        auto e = expr();
        expect_rparen(t.pos);
        return e;
      }
      case Token::Kind::ident:
        ++i_;
        return identifier(t);
      case Token::Kind::end:
        Lexer::fail(t.pos, "unexpected end of input");
      default:
        Lexer::fail(t.pos, "unexpected '" + t.text + "'");
    }
  }

  void expect_rparen(SourcePos open) {
    if (cur().kind != Token::Kind::rparen) {
      Lexer::fail(cur().pos, "expected ')' to close '(' at line " + std::to_string(open.line) + ", column " +
                                 std::to_string(open.column));
    }
    ++i_;
  }

  ExprPtr identifier(const Token& t) {
    auto n = std::make_shared<ExprNode>();
    n->pos = t.pos;
    if (kFunctions.count(t.text)) {
      if (cur().kind != Token::Kind::lparen) Lexer::fail(cur().pos, "expected '(' after " + t.text);
      const auto open = cur().pos;
      ++i_;
      // abs(j) is the euclidean norm of the frequency vector.
      if (t.text == "abs" && cur().kind == Token::Kind::ident && cur().text == "j" &&
          toks_[i_ + 1].kind == Token::Kind::rparen) {
        i_ += 2;
        n->kind = ExprNode::Kind::j_norm;
        return n;
      }
      auto arg = expr();
      expect_rparen(open);
      n->kind = ExprNode::Kind::call;
      n->name = t.text;
      n->children = {arg};
      return n;
    }
    if (t.text == "i") {
      n->kind = ExprNode::Kind::number;
      n->value = cplx{0.0, 1.0};
      return n;
    }
    if (t.text == "pi") {
      n->kind = ExprNode::Kind::number;
      n->value = cplx{3.14159265358979323846, 0.0};
      return n;
    }
    if (auto it = params_.find(t.text); it != params_.end()) {
      n->kind = ExprNode::Kind::number;
      n->value = cplx{it->second, 0.0};
      n->name = t.text;
      return n;
    }
    int index = 0;
    if (parse_component(t.text, 'x', index)) {
      n->kind = ExprNode::Kind::x_var;
      n->index = index;
      return n;
    }
    if (parse_component(t.text, 'j', index)) {
      n->kind = ExprNode::Kind::j_var;
      n->index = index;
      return n;
    }
    if (t.text == "j") Lexer::fail(t.pos, "the frequency vector j may only appear as abs(j)");
    Lexer::fail(t.pos, "unknown identifier '" + t.text + "'");
  }

  std::vector<Token> toks_;
  const std::map<std::string, double>& params_;
  std::size_t i_ = 0;
};

void visit(const ExprNode& n, const std::function<void(const ExprNode&)>& f) {
  f(n);
  for (const auto& c : n.children) visit(*c, f);
}

[[noreturn]] void domain_fail(const ExprNode& n, const std::string& msg) {
  throw Error(ErrorKind::domain, msg + " at line " + std::to_string(n.pos.line) + ", column " +
                                     std::to_string(n.pos.column));
}

cplx eval(const ExprNode& n, std::span<const double> x, std::span<const int> j) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::number:
      return n.value;
    case K::x_var:
      if (static_cast<std::size_t>(n.index) > x.size()) domain_fail(n, "x" + std::to_string(n.index) + " exceeds the torus dimension");
      return {x[static_cast<std::size_t>(n.index - 1)], 0.0};
    case K::j_var:
      if (static_cast<std::size_t>(n.index) > j.size()) domain_fail(n, "j" + std::to_string(n.index) + " exceeds the torus dimension");
      return {static_cast<double>(j[static_cast<std::size_t>(n.index - 1)]), 0.0};
    case K::j_norm: {
      double s = 0.0;
      for (int v : j) s += static_cast<double>(v) * v;
      return {std::sqrt(s), 0.0};
    }
    case K::negate:
      return -eval(*n.children[0], x, j);
    case K::add:
      return eval(*n.children[0], x, j) + eval(*n.children[1], x, j);
    case K::sub:
      return eval(*n.children[0], x, j) - eval(*n.children[1], x, j);
    case K::mul:
      return eval(*n.children[0], x, j) * eval(*n.children[1], x, j);
    case K::div: {
      const cplx den = eval(*n.children[1], x, j);
      if (den == cplx{}) domain_fail(n, "division by zero");
      return eval(*n.children[0], x, j) / den;
    }
    case K::pow: {
      const cplx base = eval(*n.children[0], x, j);
      const cplx ex = eval(*n.children[1], x, j);
      const bool integer_exp = ex.imag() == 0.0 && std::trunc(ex.real()) == ex.real() && std::abs(ex.real()) <= 64;
      if (base == cplx{} && ex.real() < 0.0) domain_fail(n, "zero raised to a negative power");
      if (integer_exp) {
        const int e = static_cast<int>(ex.real());
        cplx r{1.0, 0.0};
        for (int k = 0; k < std::abs(e); ++k) r *= base;
        return e < 0 ? cplx{1.0, 0.0} / r : r;
      }
      if (base == cplx{}) return {};
      return std::pow(base, ex);
    }
    case K::call: {
      const cplx a = eval(*n.children[0], x, j);
      if (n.name == "exp") return std::exp(a);
      if (n.name == "sin") return std::sin(a);
      if (n.name == "cos") return std::cos(a);
      if (n.name == "abs") return {std::abs(a), 0.0};
      if (n.name == "sqrt") return std::sqrt(a);
      if (n.name == "flatexp") {
        if (std::abs(a.imag()) > 1e-12 * std::max(1.0, std::abs(a.real()))) {
          domain_fail(n, "flatexp needs a real argument");
        }
        return a.real() > 0.0 ? cplx{std::exp(-1.0 / a.real()), 0.0} : cplx{};
      }
      domain_fail(n, "unknown function " + n.name);
    }
  }
  domain_fail(n, "corrupt expression node");
}

}  // namespace

bool SymbolSpec::depends_on_j() const {
  bool dep = false;
  visit(*root, [&](const ExprNode& n) {
    dep = dep || n.kind == ExprNode::Kind::j_var || n.kind == ExprNode::Kind::j_norm;
  });
  return dep;
}

bool SymbolSpec::depends_on_x() const {
  bool dep = false;
  visit(*root, [&](const ExprNode& n) { dep = dep || n.kind == ExprNode::Kind::x_var; });
  return dep;
}

int SymbolSpec::max_variable_index() const {
  int m = 0;
  visit(*root, [&](const ExprNode& n) {
    if (n.kind == ExprNode::Kind::x_var || n.kind == ExprNode::Kind::j_var) m = std::max(m, n.index);
  });
  return m;
}

std::size_t SymbolSpec::node_count() const {
  std::size_t c = 0;
  visit(*root, [&](const ExprNode&) { ++c; });
  return c;
}

int SymbolSpec::division_count() const {
  int c = 0;
  visit(*root, [&](const ExprNode& n) { c += n.kind == ExprNode::Kind::div; });
  return c;
}

SymbolSpec parse_symbol_spec(const std::string& text, const std::map<std::string, double>& parameters,
                             const std::string& name) {
  for (const auto& [key, v] : parameters) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "parameter '" + key + "' is not finite");
  }
  Parser parser(Lexer(text).run(), parameters);
  SymbolSpec spec;
  spec.name = name;
  spec.source = text;
  spec.parameters = parameters;
  spec.root = parser.parse();
  return spec;
}

std::complex<double> evaluate(const SymbolSpec& spec, std::span<const double> x, std::span<const int> j) {
  return eval(*spec.root, x, j);
}

std::string to_string(const ExprNode& n) {
  using K = ExprNode::Kind;
  auto bin = [&](const char* op) {
    return "(" + to_string(*n.children[0]) + " " + op + " " + to_string(*n.children[1]) + ")";
  };
  switch (n.kind) {
    case K::number: {
      if (!n.name.empty()) return n.name;
      std::ostringstream os;
      os.precision(17);
      if (n.value.imag() == 0.0) {
        os << n.value.real();
      } else {
        os << "(" << n.value.real() << "+" << n.value.imag() << "i)";
      }
      return os.str();
    }
    case K::x_var: return "x" + std::to_string(n.index);
    case K::j_var: return "j" + std::to_string(n.index);
    case K::j_norm: return "abs(j)";
    case K::negate: return "(-" + to_string(*n.children[0]) + ")";
    case K::add: return bin("+");
    case K::sub: return bin("-");
    case K::mul: return bin("*");
    case K::div: return bin("/");
    case K::pow: return bin("^");
    case K::call: return n.name + "(" + to_string(*n.children[0]) + ")";
  }
  return "?";
}

}  // namespace tpdo
