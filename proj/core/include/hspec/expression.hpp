#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace hspec {

/// Small complex arithmetic expression in the variables z (alias z1), z1..z9.
///
/// Grammar: numbers, the constants i and pi, the operators + - * / ^,
/// parentheses and the functions exp, log, sqrt, sin, cos. Integer powers are
/// evaluated by repeated multiplication, other powers on the principal branch.
/// Parsed expressions are immutable and safe to evaluate concurrently.
class Expression {
 public:
  struct Node;

  /// Throws ConfigError naming `field` on a syntax error or on a variable
  /// index beyond `dimension`.
  static Expression parse(std::string_view text, int dimension, const std::string& field = "expression");

  std::complex<double> evaluate(std::span<const std::complex<double>> z) const;
  std::complex<double> operator()(std::complex<double> z) const { return evaluate({&z, 1}); }

  const std::string& source() const noexcept { return source_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace hspec
