#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "specomp/lang/value.hpp"

namespace specomp {

/// Initial value of a location. `copy` separates the two runs of a
/// self-composition: public locations always use copy 0.
struct Symbol {
  Location loc;
  unsigned copy = 0;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

std::string to_string(const Symbol& s);

class SymNode;
using SymExpr = std::shared_ptr<const SymNode>;

using Assignment = std::map<Symbol, Value>;

/// Immutable symbolic expression. Builders fold constant subterms.
class SymNode {
 public:
  enum class Kind : std::uint8_t { lit, sym, un, bin, ite };

  Kind kind() const { return kind_; }
  Value value() const { return value_; }
  const Symbol& symbol() const { return symbol_; }
  UnOp unop() const { return unop_; }
  BinOp binop() const { return binop_; }
  const SymExpr& arg(std::size_t i) const { return args_[i]; }
  /// Sorted, duplicate-free symbols occurring in the expression.
  const std::vector<Symbol>& symbols() const { return symbols_; }
  bool is_lit() const { return kind_ == Kind::lit; }

  static SymExpr lit(Value v);
  static SymExpr sym(Symbol s);
  static SymExpr un(UnOp op, SymExpr a, Width w);
  static SymExpr bin(BinOp op, SymExpr a, SymExpr b, Width w);
  /// c ≠ 0 ? t : e
  static SymExpr ite(SymExpr c, SymExpr t, SymExpr e);

 private:
  Kind kind_ = Kind::lit;
  Value value_ = 0;
  Symbol symbol_;
  UnOp unop_ = UnOp::neg;
  BinOp binop_ = BinOp::add;
  std::vector<SymExpr> args_;
  std::vector<Symbol> symbols_;

  void collect();
};

/// Structural equality.
bool same(const SymExpr& a, const SymExpr& b);
std::string to_string(const SymExpr& e);

/// Evaluates with every symbol bound by `a`. Throws std::out_of_range for an
/// unbound symbol.
Value eval(const SymExpr& e, const Assignment& a, Width w);

}  // namespace specomp
