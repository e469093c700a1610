#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ars/jet.hpp"
#include "ars/types.hpp"

namespace ars {

namespace detail {
struct ExprNode;
}

/// A parsed scalar field over the variables (x, y).
///
/// Supported grammar: literals, x, y, binary + - * /, ^ with an integer
/// exponent, and the unary functions exp, log, sin, cos, sqrt.  Parsed trees
/// are immutable and shareable across threads.
class FieldExpr {
 public:
  FieldExpr() = default;

  /// Plain evaluation; exactly the order-0 jet path.
  double eval(Point2 p) const;

  /// Truncated Taylor expansion around `center` (order <= Jet2::kMaxOrder).
  Jet2 jet(Point2 center, int order) const;

  /// Canonical text form; reparsing it yields a structurally equal tree.
  std::string pretty() const;

  const std::string& source_text() const { return source_; }
  bool structurally_equal(const FieldExpr& other) const;

  explicit operator bool() const { return static_cast<bool>(ast_); }

 private:
  friend FieldExpr parse_field(std::string_view text);
  std::shared_ptr<const detail::ExprNode> ast_;
  std::string source_;
};

/// Parses a field expression.  Throws ParseError (with byte offset) on
/// syntax errors, unknown identifiers and non-integer exponents.
FieldExpr parse_field(std::string_view text);

}  // namespace ars
