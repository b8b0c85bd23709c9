#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace specomp {

using Value = std::uint64_t;
using Addr = std::uint64_t;

/// Machine word width. All arithmetic wraps modulo 2^bits.
struct Width {
  unsigned bits = 64;

  constexpr Value mask() const {
    return bits >= 64 ? ~Value{0} : ((Value{1} << bits) - 1);
  }
  constexpr Value wrap(Value v) const { return v & mask(); }

  friend constexpr bool operator==(Width, Width) = default;
};

enum class UnOp : std::uint8_t { neg, lnot };
enum class BinOp : std::uint8_t { add, sub, mul, band, bor, bxor, shl, shr, lt, eq };

Value apply(UnOp op, Value v, Width w);
Value apply(BinOp op, Value lhs, Value rhs, Width w);

std::string_view to_string(UnOp op);
std::string_view to_string(BinOp op);

/// A register or memory cell, used to name inputs of a program run.
struct Location {
  enum class Kind : std::uint8_t { reg, mem };

  Kind kind = Kind::reg;
  std::string reg;
  Addr addr = 0;

  static Location of_reg(std::string name) { return {Kind::reg, std::move(name), 0}; }
  static Location of_mem(Addr a) { return {Kind::mem, {}, a}; }

  bool is_reg() const { return kind == Kind::reg; }

  friend auto operator<=>(const Location&, const Location&) = default;
  friend bool operator==(const Location&, const Location&) = default;
};

std::string to_string(const Location& loc);

inline constexpr std::string_view kPcReg = "pc";
inline constexpr std::string_view kSpReg = "sp";
inline constexpr Value kStackSlot = 8;

}  // namespace specomp
