#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specomp/lang/ast.hpp"

namespace specomp {

struct Diagnostic {
  int line = 0;
  std::string message;
};

/// Raised with every syntax and resolution error found in a source file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Parses μASM text. Instructions get addresses 0, 1, 2, ... in textual
/// order; a `Name:` line binds Name to the address of the next instruction.
/// Labels that are call targets (and `Main`) form the function table.
Program parse_program(std::string_view text);

/// Parses a single expression (registers, literals, operators, parentheses).
ExprPtr parse_expr(std::string_view text);

/// Prints a program in the concrete syntax accepted by parse_program.
/// Requires code addresses to be contiguous from 0.
std::string print_program(const Program& p);

std::string to_string(const Instruction& i);

}  // namespace specomp
