#include "specomp/nonspec/sym_expr.hpp"

#include <algorithm>

namespace specomp {

std::string to_string(const Symbol& s) {
  std::string out = to_string(s.loc);
  if (s.copy) out += "'" + std::to_string(s.copy);
  return out;
}

void SymNode::collect() {
  for (const auto& a : args_) symbols_.insert(symbols_.end(), a->symbols_.begin(), a->symbols_.end());
  std::sort(symbols_.begin(), symbols_.end());
  symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

SymExpr SymNode::lit(Value v) {
  auto n = std::make_shared<SymNode>();
  n->value_ = v;
  return n;
}

SymExpr SymNode::sym(Symbol s) {
  auto n = std::make_shared<SymNode>();
  n->kind_ = Kind::sym;
  n->symbol_ = s;
  n->symbols_.push_back(std::move(s));
  return n;
}

SymExpr SymNode::un(UnOp op, SymExpr a, Width w) {
  if (a->is_lit()) return lit(apply(op, a->value(), w));
  auto n = std::make_shared<SymNode>();
  n->kind_ = Kind::un;
  n->unop_ = op;
  n->args_ = {std::move(a)};
  n->collect();
  return n;
}

SymExpr SymNode::bin(BinOp op, SymExpr a, SymExpr b, Width w) {
  if (a->is_lit() && b->is_lit()) return lit(apply(op, a->value(), b->value(), w));
  auto n = std::make_shared<SymNode>();
  n->kind_ = Kind::bin;
  n->binop_ = op;
  n->args_ = {std::move(a), std::move(b)};
  n->collect();
  return n;
}

SymExpr SymNode::ite(SymExpr c, SymExpr t, SymExpr e) {
  if (c->is_lit()) return c->value() != 0 ? t : e;
  if (same(t, e)) return t;
  auto n = std::make_shared<SymNode>();
  n->kind_ = Kind::ite;
  n->args_ = {std::move(c), std::move(t), std::move(e)};
  n->collect();
  return n;
}

bool same(const SymExpr& a, const SymExpr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case SymNode::Kind::lit: return a->value() == b->value();
    case SymNode::Kind::sym: return a->symbol() == b->symbol();
    case SymNode::Kind::un: return a->unop() == b->unop() && same(a->arg(0), b->arg(0));
    case SymNode::Kind::bin:
      return a->binop() == b->binop() && same(a->arg(0), b->arg(0)) && same(a->arg(1), b->arg(1));
    case SymNode::Kind::ite:
      return same(a->arg(0), b->arg(0)) && same(a->arg(1), b->arg(1)) && same(a->arg(2), b->arg(2));
  }
  return false;
}

std::string to_string(const SymExpr& e) {
  if (!e) return "_";
  switch (e->kind()) {
    case SymNode::Kind::lit: return std::to_string(e->value());
    case SymNode::Kind::sym: return to_string(e->symbol());
    case SymNode::Kind::un: return std::string(to_string(e->unop())) + to_string(e->arg(0));
    case SymNode::Kind::bin:
      return "(" + to_string(e->arg(0)) + " " + std::string(to_string(e->binop())) + " " +
             to_string(e->arg(1)) + ")";
    case SymNode::Kind::ite:
      return "(" + to_string(e->arg(0)) + " ? " + to_string(e->arg(1)) + " : " + to_string(e->arg(2)) +
             ")";
  }
  return "?";
}

Value eval(const SymExpr& e, const Assignment& a, Width w) {
  switch (e->kind()) {
    case SymNode::Kind::lit: return w.wrap(e->value());
    case SymNode::Kind::sym: return w.wrap(a.at(e->symbol()));
    case SymNode::Kind::un: return apply(e->unop(), eval(e->arg(0), a, w), w);
    case SymNode::Kind::bin: return apply(e->binop(), eval(e->arg(0), a, w), eval(e->arg(1), a, w), w);
    case SymNode::Kind::ite:
      return eval(e->arg(0), a, w) != 0 ? eval(e->arg(1), a, w) : eval(e->arg(2), a, w);
  }
  return 0;
}

}  // namespace specomp
