#include "hspec/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "hspec/error.hpp"

namespace hspec {

using Complex = std::complex<double>;

struct Expression::Node {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  enum class Function { exp, log, sqrt, sin, cos };

  Kind kind = Kind::constant;
  Complex value{};
  int variable = 0;
  Function function = Function::exp;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_constant(Complex v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Complex integer_power(Complex base, long long exponent) {
  if (exponent < 0) return 1.0 / integer_power(base, -exponent);
  Complex result{1.0};
  for (; exponent > 0; exponent >>= 1) {
    if (exponent & 1) result *= base;
    base *= base;
  }
  return result;
}

Complex eval(const Node& node, std::span<const Complex> z) {
  switch (node.kind) {
    case Node::Kind::constant: return node.value;
    case Node::Kind::variable: return z[static_cast<std::size_t>(node.variable)];
    case Node::Kind::negate: return -eval(*node.lhs, z);
    case Node::Kind::add: return eval(*node.lhs, z) + eval(*node.rhs, z);
    case Node::Kind::sub: return eval(*node.lhs, z) - eval(*node.rhs, z);
    case Node::Kind::mul: return eval(*node.lhs, z) * eval(*node.rhs, z);
    case Node::Kind::div: return eval(*node.lhs, z) / eval(*node.rhs, z);
    case Node::Kind::pow: {
      const Complex base = eval(*node.lhs, z);
      const Complex exponent = eval(*node.rhs, z);
      if (exponent.imag() == 0.0 && std::abs(exponent.real()) <= 64.0 &&
          exponent.real() == std::round(exponent.real())) {
        return integer_power(base, static_cast<long long>(exponent.real()));
      }
      return std::pow(base, exponent);
    }
    case Node::Kind::call: {
      const Complex arg = eval(*node.lhs, z);
      switch (node.function) {
        case Node::Function::exp: return std::exp(arg);
        case Node::Function::log: return std::log(arg);
        case Node::Function::sqrt: return std::sqrt(arg);
        case Node::Function::sin: return std::sin(arg);
        case Node::Function::cos: return std::cos(arg);
      }
    }
  }
  return {};
}

class Parser {
 public:
  Parser(std::string_view text, int dimension, const std::string& field)
      : text_(text), dimension_(dimension), field_(field) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(field_, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Node::Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Node::Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Node::Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Node::Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->lhs = unary();
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      return make_binary(Node::Kind::pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make_constant(value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "i") return make_constant(Complex{0.0, 1.0});
    if (name == "pi") return make_constant(std::numbers::pi);
    if (name == "z" || (name.size() == 2 && name[0] == 'z' && name[1] >= '1' && name[1] <= '9')) {
      const int index = name.size() == 1 ? 0 : name[1] - '1';
      if (index >= dimension_) fail("variable " + std::string(name) + " exceeds dimension " + std::to_string(dimension_));
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::variable;
      n->variable = index;
      return n;
    }

    Node::Function function;
    if (name == "exp") {
      function = Node::Function::exp;
    } else if (name == "log") {
      function = Node::Function::log;
    } else if (name == "sqrt") {
      function = Node::Function::sqrt;
    } else if (name == "sin") {
      function = Node::Function::sin;
    } else if (name == "cos") {
      function = Node::Function::cos;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) fail("expected '(' after " + std::string(name));
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->function = function;
    n->lhs = expression();
    if (!accept(')')) fail("expected ')'");
    return n;
  }

  std::string_view text_;
  int dimension_;
  const std::string& field_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, int dimension, const std::string& field) {
  Parser parser(text, dimension, field);
  return Expression(parser.parse(), std::string(text));
}

Complex Expression::evaluate(std::span<const Complex> z) const { return eval(*root_, z); }

}  // namespace hspec
