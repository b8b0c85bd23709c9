#include "specomp/lang/value.hpp"

namespace specomp {

Value apply(UnOp op, Value v, Width w) {
  switch (op) {
    case UnOp::neg:
      return w.wrap(~v + 1);
    case UnOp::lnot:
      return w.wrap(v) == 0 ? 1 : 0;
  }
  return 0;
}

Value apply(BinOp op, Value lhs, Value rhs, Width w) {
  lhs = w.wrap(lhs);
  rhs = w.wrap(rhs);
  switch (op) {
    case BinOp::add:
      return w.wrap(lhs + rhs);
    case BinOp::sub:
      return w.wrap(lhs - rhs);
    case BinOp::mul:
      return w.wrap(lhs * rhs);
    case BinOp::band:
      return lhs & rhs;
    case BinOp::bor:
      return lhs | rhs;
    case BinOp::bxor:
      return lhs ^ rhs;
    case BinOp::shl:
      return rhs >= w.bits ? 0 : w.wrap(lhs << rhs);
    case BinOp::shr:
      return rhs >= w.bits ? 0 : lhs >> rhs;
    case BinOp::lt:
      return lhs < rhs ? 1 : 0;
    case BinOp::eq:
      return lhs == rhs ? 1 : 0;
  }
  return 0;
}

std::string_view to_string(UnOp op) {
  switch (op) {
    case UnOp::neg:
      return "-";
    case UnOp::lnot:
      return "!";
  }
  return "?";
}

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::add:
      return "+";
    case BinOp::sub:
      return "-";
    case BinOp::mul:
      return "*";
    case BinOp::band:
      return "&";
    case BinOp::bor:
      return "|";
    case BinOp::bxor:
      return "^";
    case BinOp::shl:
      return "<<";
    case BinOp::shr:
      return ">>";
    case BinOp::lt:
      return "<";
    case BinOp::eq:
      return "==";
  }
  return "?";
}

std::string to_string(const Location& loc) {
  if (loc.is_reg()) return loc.reg;
  return "[" + std::to_string(loc.addr) + "]";
}

}  // namespace specomp
