#include <gtest/gtest.h>

#include <random>

#include "specomp/lang/config.hpp"
#include "specomp/lang/parser.hpp"
#include "specomp/lang/policy.hpp"
#include "support/random_program.hpp"

namespace specomp {
namespace {

TEST(Parse, SingleSkip) {
  auto p = parse_program("Main:\n  skip\n");
  ASSERT_EQ(p.code.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<instr::Skip>(p.code.at(0)));
  EXPECT_EQ(p.functions, (std::map<std::string, Addr>{{"Main", 0}}));
  EXPECT_EQ(p.entry(), 0u);
}

TEST(Parse, RsbListingAddresses) {
  auto p = parse_program(R"(
Manip_Stack:
    sp <- sp + 8
    ret
Speculate:
    call Manip_Stack
    load eax, secret
    load edx, eax
    ret
Main:
    call Speculate
    skip
)");
  EXPECT_EQ(p.code.size(), 8u);
  EXPECT_EQ(p.functions.at("Manip_Stack"), 0u);
  EXPECT_EQ(p.functions.at("Speculate"), 2u);
  EXPECT_EQ(p.functions.at("Main"), 6u);
  EXPECT_EQ(p.entry(), 6u);
}

TEST(Parse, UnresolvedLabel) {
  try {
    parse_program("beqz x, Missing\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].line, 1);
    EXPECT_NE(e.diagnostics()[0].message.find("Missing"), std::string::npos);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_program("L:\nL:\nskip\n"), ParseError);
  EXPECT_THROW(parse_program("pc <- 3\n"), ParseError);
  EXPECT_THROW(parse_program("call Nowhere\n"), ParseError);
  EXPECT_THROW(parse_program("load x\n"), ParseError);
  EXPECT_THROW(parse_program("x <- (1 + \n"), ParseError);
  EXPECT_THROW(parse_program("frobnicate x\n"), ParseError);
}

TEST(Parse, AllDiagnosticsCollected) {
  try {
    parse_program("x <- \nskip\nbeqz y, Nope\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.diagnostics().size(), 2u);
  }
}

TEST(Parse, CommentsAndForms) {
  auto p = parse_program(R"(# header
Main:
  x <- 1 + 2 * 3   # trailing
  cmov y, x, z
  load v, arr + x
  store v, 0x10
  beqz x, End
  jmp End
  spbarr
End:
)");
  ASSERT_EQ(p.code.size(), 7u);
  const auto& a = std::get<instr::Assign>(p.code.at(0));
  EXPECT_EQ(eval_expr(*a.expr, std::map<std::string, Value>{}, Width{}), 7u);
  EXPECT_EQ(std::get<instr::Beqz>(p.code.at(4)).target, 7u);
  const auto& j = std::get<instr::Jmp>(p.code.at(5));
  EXPECT_EQ(eval_expr(*j.target, std::map<std::string, Value>{}, Width{}), 7u);
}

TEST(Eval, Examples) {
  std::map<std::string, Value> regs{{"x", 41}};
  EXPECT_EQ(eval_expr(*Expr::lit(7), regs, Width{}), 7u);
  EXPECT_EQ(eval_expr(*parse_expr("x + 1"), regs, Width{}), 42u);
  EXPECT_THROW(eval_expr(*parse_expr("y"), regs, Width{}), EvalError);
}

// Reference: exact integer arithmetic reduced modulo 2^W afterwards.
long long reference_mod(long long v, int bits) {
  long long m = 1LL << bits;
  return ((v % m) + m) % m;
}

TEST(Eval, WrapsAgainstReference) {
  std::mt19937_64 rng(7);
  for (int bits : {3, 4, 8, 16}) {
    Width w{unsigned(bits)};
    std::uniform_int_distribution<long long> d(0, (1LL << bits) - 1);
    for (int i = 0; i < 200; ++i) {
      long long x = d(rng), y = d(rng);
      std::map<std::string, Value> regs{{"x", Value(x)}, {"y", Value(y)}};
      EXPECT_EQ(eval_expr(*parse_expr("x - y"), regs, w), Value(reference_mod(x - y, bits)));
      EXPECT_EQ(eval_expr(*parse_expr("x + y"), regs, w), Value(reference_mod(x + y, bits)));
      EXPECT_EQ(eval_expr(*parse_expr("x * y"), regs, w), Value(reference_mod(x * y, bits)));
      EXPECT_EQ(eval_expr(*parse_expr("-x"), regs, w), Value(reference_mod(-x, bits)));
      EXPECT_EQ(eval_expr(*parse_expr("x < y"), regs, w), Value(x < y));
    }
  }
  std::map<std::string, Value> regs{{"x", 0}, {"y", 1}};
  EXPECT_EQ(eval_expr(*parse_expr("x - y"), regs, Width{8}), 255u);
  EXPECT_EQ(eval_expr(*parse_expr("1 << 8"), regs, Width{8}), 0u);
}

TEST(Eval, Deterministic) {
  std::mt19937_64 rng(11);
  testing::GenOptions opt;
  for (int i = 0; i < 100; ++i) {
    auto rp = testing::random_program(rng, opt);
    auto in = testing::random_inputs(rng, rp.program, Width{});
    std::map<std::string, Value> regs;
    for (const auto& [l, v] : in)
      if (l.is_reg()) regs[l.reg] = v;
    for (const auto& [a, ins] : rp.program.code) {
      if (const auto* as = std::get_if<instr::Assign>(&ins); as && as->reg != kSpReg) {
        EXPECT_EQ(eval_expr(*as->expr, regs, Width{}), eval_expr(*as->expr, regs, Width{}));
      }
    }
  }
}

TEST(RoundTrip, RandomPrograms) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto rp = testing::random_program(rng);
    auto text = print_program(rp.program);
    Program back;
    ASSERT_NO_THROW(back = parse_program(text)) << text;
    EXPECT_TRUE(back == rp.program) << text << "\n---\n" << print_program(back);
  }
}

TEST(Policy, JsonRoundTrip) {
  auto p = Policy::from_json(R"({"public_registers":["x","p"],"public_memory":[{"lo":0,"hi":8}],
      "init_memory":[{"addr":4096,"value":99}],"init_registers":{"sp":4096},"_note":"ok"})");
  EXPECT_TRUE(p.is_public(Location::of_reg("x")));
  EXPECT_TRUE(p.is_public(Location::of_reg("pc")));
  EXPECT_FALSE(p.is_public(Location::of_reg("y")));
  EXPECT_TRUE(p.is_public(Location::of_mem(7)));
  EXPECT_FALSE(p.is_public(Location::of_mem(8)));
  auto q = Policy::from_json(p.to_json());
  EXPECT_EQ(q.public_registers, p.public_registers);
  EXPECT_EQ(q.public_memory, p.public_memory);
  EXPECT_EQ(q.init_memory, p.init_memory);
  EXPECT_EQ(q.init_registers, p.init_registers);
}

TEST(Policy, Rejects) {
  EXPECT_THROW(Policy::from_json("[1]"), PolicyError);
  EXPECT_THROW(Policy::from_json(R"({"bogus":1})"), PolicyError);
  EXPECT_THROW(Policy::from_json(R"({"init_registers":{"pc":3}})"), PolicyError);
  EXPECT_THROW(Policy::from_json("{"), PolicyError);
}

Configuration config_with(std::map<Location, Value> in, const Policy& pol = {}) {
  return make_initial_configuration(parse_program("skip\n"), pol, Width{}, in);
}

TEST(LowEquivalence, Examples) {
  Policy px;
  px.public_registers = {"x"};
  auto a = config_with({{Location::of_reg("x"), 1}, {Location::of_mem(0), 5}});
  auto b = config_with({{Location::of_reg("x"), 1}, {Location::of_mem(0), 6}});
  EXPECT_TRUE(low_equivalent(a, a, px));
  EXPECT_TRUE(low_equivalent(a, b, px));

  Policy pm;
  pm.public_memory = {{0, 8}};
  auto c = config_with({{Location::of_mem(4), 1}});
  auto d = config_with({{Location::of_mem(4), 2}});
  EXPECT_FALSE(low_equivalent(c, d, pm));
  // An unset cell reads 0 on one side.
  auto e = config_with({});
  EXPECT_FALSE(low_equivalent(c, e, pm));
}

TEST(LowEquivalence, IsEquivalenceRelation) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int round = 0; round < 300; ++round) {
    Policy pol;
    if (bit(rng)) pol.public_registers.insert("x");
    if (bit(rng)) pol.public_registers.insert("y");
    pol.public_memory.push_back({0, Addr(bit(rng) * 2 + bit(rng))});
    std::vector<Configuration> cs;
    for (int i = 0; i < 4; ++i) {
      std::map<Location, Value> in;
      for (const char* r : {"x", "y"})
        if (bit(rng)) in[Location::of_reg(r)] = Value(bit(rng));
      for (Addr m = 0; m < 3; ++m)
        if (bit(rng)) in[Location::of_mem(m)] = Value(bit(rng));
      cs.push_back(config_with(in));
    }
    for (const auto& a : cs) {
      EXPECT_TRUE(low_equivalent(a, a, pol));
      for (const auto& b : cs) {
        EXPECT_EQ(low_equivalent(a, b, pol), low_equivalent(b, a, pol));
        for (const auto& c : cs) {
          if (low_equivalent(a, b, pol) && low_equivalent(b, c, pol)) {
            EXPECT_TRUE(low_equivalent(a, c, pol));
          }
        }
      }
    }
  }
}

TEST(Configuration, InitialState) {
  Policy pol;
  pol.init_memory[0x1000] = 77;
  auto p = parse_program("skip\nMain:\nskip\n");
  InputRecorder rec;
  auto c = make_initial_configuration(p, pol, Width{}, {}, &rec);
  EXPECT_EQ(c.pc(), 1u);
  EXPECT_EQ(c.sp(), 0x1000u);
  EXPECT_EQ(c.mem(0x1000), 77u);
  EXPECT_TRUE(rec.misses().empty());
  EXPECT_EQ(c.reg("x"), 0u);
  EXPECT_EQ(c.mem(3), 0u);
  ASSERT_EQ(rec.misses().size(), 2u);
  EXPECT_EQ(rec.misses()[0], Location::of_reg("x"));
  EXPECT_EQ(rec.misses()[1], Location::of_mem(3));
  EXPECT_EQ(default_stack_pointer(Width{4}), 8u);
}

}  // namespace
}  // namespace specomp
