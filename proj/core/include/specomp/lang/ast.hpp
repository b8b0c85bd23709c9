#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "specomp/lang/value.hpp"

namespace specomp {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree: literal, register, unary or binary operator.
class Expr {
 public:
  struct Lit {
    Value value;
  };
  struct Reg {
    std::string name;
  };
  struct Unary {
    UnOp op;
    ExprPtr arg;
  };
  struct Binary {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  using Node = std::variant<Lit, Reg, Unary, Binary>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  static ExprPtr lit(Value v);
  static ExprPtr reg(std::string name);
  static ExprPtr unary(UnOp op, ExprPtr arg);
  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);

  /// Registers mentioned anywhere in the tree.
  void collect_registers(std::set<std::string>& out) const;

 private:
  Node node_;
};

bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);
std::string to_string(const Expr& e);

/// Looks up a register value; returns nullopt when the register is undefined.
using RegisterLookup = std::function<std::optional<Value>(const std::string&)>;

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& reg)
      : std::runtime_error("undefined register '" + reg + "'"), reg_(reg) {}
  const std::string& reg() const { return reg_; }

 private:
  std::string reg_;
};

/// Strict evaluation modulo 2^W. Throws EvalError on an undefined register.
Value eval_expr(const Expr& e, const RegisterLookup& regs, Width w);
Value eval_expr(const Expr& e, const std::map<std::string, Value>& regs, Width w);

// The ten instruction forms.
namespace instr {
struct Skip {};
struct Assign {
  std::string reg;
  ExprPtr expr;
};
struct Load {
  std::string reg;
  ExprPtr addr;
};
struct Store {
  std::string reg;
  ExprPtr addr;
};
struct Jmp {
  ExprPtr target;
};
struct Beqz {
  std::string reg;
  Addr target;
};
/// reg <- cond ? value : reg
struct Cmov {
  std::string reg;
  ExprPtr value;
  ExprPtr cond;
};
struct Spbarr {};
struct Call {
  std::string function;
};
struct Ret {};
}  // namespace instr

using Instruction = std::variant<instr::Skip, instr::Assign, instr::Load, instr::Store, instr::Jmp,
                                 instr::Beqz, instr::Cmov, instr::Spbarr, instr::Call, instr::Ret>;

enum class InstrKind : std::uint8_t { skip, assign, load, store, jmp, beqz, cmov, spbarr, call, ret };
inline constexpr std::size_t kInstrKindCount = 10;

InstrKind kind_of(const Instruction& i);
std::string_view to_string(InstrKind k);
bool operator==(const Instruction& a, const Instruction& b);

/// Small bitset over instruction kinds.
class KindSet {
 public:
  constexpr KindSet() = default;
  constexpr KindSet(std::initializer_list<InstrKind> kinds) {
    for (auto k : kinds) bits_ |= bit(k);
  }
  constexpr bool contains(InstrKind k) const { return (bits_ & bit(k)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr KindSet operator|(KindSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr KindSet operator&(KindSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr bool operator==(const KindSet&) const = default;
  std::string to_string() const;

 private:
  static constexpr std::uint16_t bit(InstrKind k) { return std::uint16_t(1u << unsigned(k)); }
  static constexpr KindSet from_bits(std::uint16_t b) {
    KindSet s;
    s.bits_ = b;
    return s;
  }
  std::uint16_t bits_ = 0;
};

/// A μASM program: code addressed by naturals plus a function table.
struct Program {
  std::map<Addr, Instruction> code;
  std::map<std::string, Addr> functions;

  /// nullptr when the address holds no instruction (termination).
  const Instruction* at(Addr a) const {
    auto it = code.find(a);
    return it == code.end() ? nullptr : &it->second;
  }

  /// Entry point: the address of `Main` when present, else 0.
  Addr entry() const;

  std::set<std::string> registers() const;

  friend bool operator==(const Program&, const Program&);
};

}  // namespace specomp
