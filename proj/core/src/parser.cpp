#include "specomp/lang/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

namespace specomp {

namespace {

std::string describe(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) os << '\n';
    os << "line " << diags[i].line << ": " << diags[i].message;
  }
  return os.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

std::optional<Value> parse_number(std::string_view s) {
  Value v = 0;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

class SyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recursive-descent parser over a single expression string.
class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    auto e = comparison();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  // Lookahead that refuses to split multi-character operators.
  bool accept_single(char c, std::string_view not_followed_by) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) return false;
    if (pos_ + 1 < text_.size() && not_followed_by.find(text_[pos_ + 1]) != std::string_view::npos)
      return false;
    ++pos_;
    return true;
  }

  ExprPtr comparison() {
    auto lhs = bit_or();
    for (;;) {
      if (accept("==")) {
        lhs = Expr::binary(BinOp::eq, lhs, bit_or());
      } else if (accept_single('<', "<-=")) {
        lhs = Expr::binary(BinOp::lt, lhs, bit_or());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr bit_or() {
    auto lhs = bit_xor();
    while (accept_single('|', "|")) lhs = Expr::binary(BinOp::bor, lhs, bit_xor());
    return lhs;
  }

  ExprPtr bit_xor() {
    auto lhs = bit_and();
    while (accept("^")) lhs = Expr::binary(BinOp::bxor, lhs, bit_and());
    return lhs;
  }

  ExprPtr bit_and() {
    auto lhs = shift();
    while (accept_single('&', "&")) lhs = Expr::binary(BinOp::band, lhs, shift());
    return lhs;
  }

  ExprPtr shift() {
    auto lhs = additive();
    for (;;) {
      if (accept("<<")) {
        lhs = Expr::binary(BinOp::shl, lhs, additive());
      } else if (accept(">>")) {
        lhs = Expr::binary(BinOp::shr, lhs, additive());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr additive() {
    auto lhs = multiplicative();
    for (;;) {
      if (accept("+")) {
        lhs = Expr::binary(BinOp::add, lhs, multiplicative());
      } else if (accept("-")) {
        lhs = Expr::binary(BinOp::sub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr multiplicative() {
    auto lhs = unary();
    while (accept("*")) lhs = Expr::binary(BinOp::mul, lhs, unary());
    return lhs;
  }

  ExprPtr unary() {
    if (accept("-")) return Expr::unary(UnOp::neg, unary());
    if (accept_single('!', "=")) return Expr::unary(UnOp::lnot, unary());
    return primary();
  }

  ExprPtr primary() {
    skip_ws();
    if (accept("(")) {
      auto e = comparison();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      auto v = parse_number(text_.substr(start, pos_ - start));
      if (!v) fail("bad number '" + std::string(text_.substr(start, pos_ - start)) + "'");
      return Expr::lit(*v);
    }
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      return Expr::reg(std::string(text_.substr(start, pos_ - start)));
    }
    if (pos_ >= text_.size()) fail("expected an expression");
    fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool is_reserved(std::string_view name) { return name == kPcReg || name == kSpReg; }

struct PendingLabel {
  int line;
  Addr at;
  std::string label;
};

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diags)
    : std::runtime_error(describe(diags)), diags_(std::move(diags)) {}

ExprPtr parse_expr(std::string_view text) {
  try {
    return ExprParser(text).parse();
  } catch (const SyntaxError& e) {
    throw ParseError({{0, e.what()}});
  }
}

Program parse_program(std::string_view text) {
  Program prog;
  std::vector<Diagnostic> diags;
  std::map<std::string, Addr> labels;
  std::map<std::string, int> label_lines;
  std::vector<PendingLabel> beqz_labels;
  std::vector<PendingLabel> jmp_labels;
  std::vector<PendingLabel> calls;
  Addr next = 0;
  int line_no = 0;

  auto error = [&](std::string msg) { diags.push_back({line_no, std::move(msg)}); };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.back() == ':') {
      auto name = trim(line.substr(0, line.size() - 1));
      if (!is_identifier(name)) {
        error("invalid label '" + std::string(name) + "'");
      } else if (is_reserved(name)) {
        error("'" + std::string(name) + "' is reserved");
      } else if (labels.count(std::string(name))) {
        error("duplicate label '" + std::string(name) + "' (first defined on line " +
              std::to_string(label_lines[std::string(name)]) + ")");
      } else {
        labels[std::string(name)] = next;
        label_lines[std::string(name)] = line_no;
      }
      continue;
    }

    try {
      std::optional<Instruction> ins;
      if (auto arrow = line.find("<-"); arrow != std::string_view::npos &&
                                        is_identifier(trim(line.substr(0, arrow)))) {
        auto reg = std::string(trim(line.substr(0, arrow)));
        if (reg == kPcReg) throw SyntaxError("pc cannot be assigned; use jmp");
        ins = instr::Assign{reg, ExprParser(line.substr(arrow + 2)).parse()};
      } else {
        std::size_t sp = 0;
        while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
        std::string op(line.substr(0, sp));
        auto ops = sp < line.size() ? split_operands(line.substr(sp)) : std::vector<std::string_view>{};
        auto want = [&](std::size_t n) {
          if (ops.size() != n)
            throw SyntaxError("'" + op + "' takes " + std::to_string(n) + " operand(s)");
        };
        auto want_reg = [&](std::string_view r, bool writes) {
          if (!is_identifier(r)) throw SyntaxError("expected a register, got '" + std::string(r) + "'");
          if (writes && r == kPcReg) throw SyntaxError("pc cannot be written by '" + op + "'");
          return std::string(r);
        };
        if (op == "skip") {
          want(0);
          ins = instr::Skip{};
        } else if (op == "spbarr") {
          want(0);
          ins = instr::Spbarr{};
        } else if (op == "ret") {
          want(0);
          ins = instr::Ret{};
        } else if (op == "load") {
          want(2);
          ins = instr::Load{want_reg(ops[0], true), ExprParser(ops[1]).parse()};
        } else if (op == "store") {
          want(2);
          ins = instr::Store{want_reg(ops[0], false), ExprParser(ops[1]).parse()};
        } else if (op == "cmov") {
          want(3);
          ins = instr::Cmov{want_reg(ops[0], true), ExprParser(ops[1]).parse(),
                            ExprParser(ops[2]).parse()};
        } else if (op == "beqz") {
          want(2);
          auto reg = want_reg(ops[0], false);
          if (auto n = parse_number(ops[1])) {
            ins = instr::Beqz{reg, *n};
          } else if (is_identifier(ops[1])) {
            beqz_labels.push_back({line_no, next, std::string(ops[1])});
            ins = instr::Beqz{reg, 0};
          } else {
            throw SyntaxError("bad branch target '" + std::string(ops[1]) + "'");
          }
        } else if (op == "jmp") {
          want(1);
          auto target = ExprParser(ops[0]).parse();
          if (const auto* r = std::get_if<Expr::Reg>(&target->node()); r && !is_reserved(r->name))
            jmp_labels.push_back({line_no, next, r->name});
          ins = instr::Jmp{target};
        } else if (op == "call") {
          want(1);
          if (!is_identifier(ops[0]))
            throw SyntaxError("bad function name '" + std::string(ops[0]) + "'");
          calls.push_back({line_no, next, std::string(ops[0])});
          ins = instr::Call{std::string(ops[0])};
        } else {
          throw SyntaxError("unknown instruction '" + op + "'");
        }
      }
      prog.code.emplace(next++, std::move(*ins));
    } catch (const SyntaxError& e) {
      error(e.what());
    }
  }

  for (const auto& pending : beqz_labels) {
    auto it = labels.find(pending.label);
    if (it == labels.end()) {
      diags.push_back({pending.line, "unresolved label '" + pending.label + "'"});
      continue;
    }
    std::get<instr::Beqz>(prog.code.at(pending.at)).target = it->second;
  }
  for (const auto& pending : jmp_labels) {
    auto it = labels.find(pending.label);
    if (it != labels.end()) prog.code.at(pending.at) = instr::Jmp{Expr::lit(it->second)};
  }
  for (const auto& pending : calls) {
    auto it = labels.find(pending.label);
    if (it == labels.end()) {
      diags.push_back({pending.line, "unresolved function '" + pending.label + "'"});
      continue;
    }
    prog.functions[pending.label] = it->second;
  }
  if (auto it = labels.find("Main"); it != labels.end()) prog.functions["Main"] = it->second;

  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    throw ParseError(std::move(diags));
  }
  return prog;
}

std::string to_string(const Instruction& i) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, instr::Skip>) {
          return "skip";
        } else if constexpr (std::is_same_v<T, instr::Assign>) {
          return x.reg + " <- " + to_string(*x.expr);
        } else if constexpr (std::is_same_v<T, instr::Load>) {
          return "load " + x.reg + ", " + to_string(*x.addr);
        } else if constexpr (std::is_same_v<T, instr::Store>) {
          return "store " + x.reg + ", " + to_string(*x.addr);
        } else if constexpr (std::is_same_v<T, instr::Jmp>) {
          return "jmp " + to_string(*x.target);
        } else if constexpr (std::is_same_v<T, instr::Beqz>) {
          return "beqz " + x.reg + ", " + std::to_string(x.target);
        } else if constexpr (std::is_same_v<T, instr::Cmov>) {
          return "cmov " + x.reg + ", " + to_string(*x.value) + ", " + to_string(*x.cond);
        } else if constexpr (std::is_same_v<T, instr::Spbarr>) {
          return "spbarr";
        } else if constexpr (std::is_same_v<T, instr::Call>) {
          return "call " + x.function;
        } else {
          return "ret";
        }
      },
      i);
}

std::string print_program(const Program& p) {
  const Addr end = p.code.size();
  std::map<Addr, std::vector<std::string>> names;
  for (const auto& [name, addr] : p.functions) names[addr].push_back(name);

  std::map<Addr, std::string> branch_label;
  for (const auto& [addr, ins] : p.code) {
    const auto* b = std::get_if<instr::Beqz>(&ins);
    if (!b || b->target > end) continue;
    if (auto it = names.find(b->target); it != names.end()) {
      branch_label[b->target] = it->second.front();
    } else {
      branch_label[b->target] = "L" + std::to_string(b->target);
    }
  }
  for (const auto& [addr, label] : branch_label) {
    auto& v = names[addr];
    if (std::find(v.begin(), v.end(), label) == v.end()) v.push_back(label);
  }

  std::ostringstream os;
  for (Addr a = 0; a <= end; ++a) {
    if (auto it = names.find(a); it != names.end()) {
      for (const auto& n : it->second) os << n << ":\n";
    }
    if (a == end) break;
    const auto& ins = p.code.at(a);
    if (const auto* b = std::get_if<instr::Beqz>(&ins); b && b->target <= end) {
      os << "  beqz " << b->reg << ", " << branch_label.at(b->target) << "\n";
    } else {
      os << "  " << to_string(ins) << "\n";
    }
  }
  return os.str();
}

}  // namespace specomp
