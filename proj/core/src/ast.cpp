#include "specomp/lang/ast.hpp"

#include <type_traits>

namespace specomp {

ExprPtr Expr::lit(Value v) { return std::make_shared<const Expr>(Lit{v}); }
ExprPtr Expr::reg(std::string name) { return std::make_shared<const Expr>(Reg{std::move(name)}); }
ExprPtr Expr::unary(UnOp op, ExprPtr arg) {
  return std::make_shared<const Expr>(Unary{op, std::move(arg)});
}
ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Binary{op, std::move(lhs), std::move(rhs)});
}

void Expr::collect_registers(std::set<std::string>& out) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Reg>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          n.arg->collect_registers(out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          n.lhs->collect_registers(out);
          n.rhs->collect_registers(out);
        }
      },
      node_);
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Expr::Reg>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return x.op == y.op && same_expr(x.arg, y.arg);
        } else {
          return x.op == y.op && same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
        }
      },
      a.node());
}

std::string to_string(const Expr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Reg>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return std::string(to_string(n.op)) + to_string(*n.arg);
        } else {
          return "(" + to_string(*n.lhs) + " " + std::string(to_string(n.op)) + " " +
                 to_string(*n.rhs) + ")";
        }
      },
      e.node());
}

Value eval_expr(const Expr& e, const RegisterLookup& regs, Width w) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Lit>) {
          return w.wrap(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Reg>) {
          auto v = regs(n.name);
          if (!v) throw EvalError(n.name);
          return w.wrap(*v);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return apply(n.op, eval_expr(*n.arg, regs, w), w);
        } else {
          Value lhs = eval_expr(*n.lhs, regs, w);
          Value rhs = eval_expr(*n.rhs, regs, w);
          return apply(n.op, lhs, rhs, w);
        }
      },
      e.node());
}

Value eval_expr(const Expr& e, const std::map<std::string, Value>& regs, Width w) {
  return eval_expr(
      e,
      [&](const std::string& name) -> std::optional<Value> {
        auto it = regs.find(name);
        if (it == regs.end()) return std::nullopt;
        return it->second;
      },
      w);
}

InstrKind kind_of(const Instruction& i) { return static_cast<InstrKind>(i.index()); }

std::string_view to_string(InstrKind k) {
  static constexpr std::string_view names[] = {"skip", "assign", "load",   "store", "jmp",
                                               "beqz", "cmov",   "spbarr", "call",  "ret"};
  return names[static_cast<std::size_t>(k)];
}

std::string KindSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < kInstrKindCount; ++i) {
    auto k = static_cast<InstrKind>(i);
    if (!contains(k)) continue;
    if (!first) out += ", ";
    out += specomp::to_string(k);
    first = false;
  }
  return out + "}";
}

bool operator==(const Instruction& a, const Instruction& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, instr::Assign>) {
          return x.reg == y.reg && same_expr(x.expr, y.expr);
        } else if constexpr (std::is_same_v<T, instr::Load> || std::is_same_v<T, instr::Store>) {
          return x.reg == y.reg && same_expr(x.addr, y.addr);
        } else if constexpr (std::is_same_v<T, instr::Jmp>) {
          return same_expr(x.target, y.target);
        } else if constexpr (std::is_same_v<T, instr::Beqz>) {
          return x.reg == y.reg && x.target == y.target;
        } else if constexpr (std::is_same_v<T, instr::Cmov>) {
          return x.reg == y.reg && same_expr(x.value, y.value) && same_expr(x.cond, y.cond);
        } else if constexpr (std::is_same_v<T, instr::Call>) {
          return x.function == y.function;
        } else {
          return true;
        }
      },
      a);
}

Addr Program::entry() const {
  auto it = functions.find("Main");
  return it == functions.end() ? 0 : it->second;
}

std::set<std::string> Program::registers() const {
  std::set<std::string> out{std::string(kPcReg), std::string(kSpReg)};
  for (const auto& [addr, ins] : code) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, instr::Assign>) {
            out.insert(x.reg);
            x.expr->collect_registers(out);
          } else if constexpr (std::is_same_v<T, instr::Load> || std::is_same_v<T, instr::Store>) {
            out.insert(x.reg);
            x.addr->collect_registers(out);
          } else if constexpr (std::is_same_v<T, instr::Jmp>) {
            x.target->collect_registers(out);
          } else if constexpr (std::is_same_v<T, instr::Beqz>) {
            out.insert(x.reg);
          } else if constexpr (std::is_same_v<T, instr::Cmov>) {
            out.insert(x.reg);
            x.value->collect_registers(out);
            x.cond->collect_registers(out);
          }
        },
        ins);
  }
  return out;
}

bool operator==(const Program& a, const Program& b) {
  if (a.functions != b.functions || a.code.size() != b.code.size()) return false;
  for (auto ia = a.code.begin(), ib = b.code.begin(); ia != a.code.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  }
  return true;
}

}  // namespace specomp
