#include <gtest/gtest.h>

#include <random>

#include "specomp/lang/parser.hpp"
#include "specomp/nonspec/observation.hpp"
#include "specomp/nonspec/step.hpp"
#include "support/random_program.hpp"

namespace specomp {
namespace {

using O = Observation;

Configuration start(const Program& p, std::map<Location, Value> in = {}) {
  return make_initial_configuration(p, Policy{}, Width{}, in);
}

TEST(NsStep, Store) {
  auto p = parse_program("store x, 3\n");
  auto r = ns_step(p, start(p, {{Location::of_reg("x"), 5}}));
  ASSERT_EQ(r.status, StepStatus::ok);
  EXPECT_EQ(r.next.mem(3), 5u);
  EXPECT_EQ(r.next.pc(), 1u);
  EXPECT_EQ(r.obs, O::store(3));
}

TEST(NsStep, BeqzTaken) {
  auto p = parse_program("beqz x, 7\n");
  auto r = ns_step(p, start(p, {{Location::of_reg("x"), 0}}));
  EXPECT_EQ(r.next.pc(), 7u);
  EXPECT_EQ(r.obs, O::pc(7));
  auto s = ns_step(p, start(p, {{Location::of_reg("x"), 2}}));
  EXPECT_EQ(s.next.pc(), 1u);
  EXPECT_EQ(s.obs, O::pc(1));
}

TEST(NsStep, Ret) {
  auto p = parse_program("ret\n");
  auto c = start(p, {{Location::of_mem(96), 13}});
  c.set_reg("sp", 96);
  auto r = ns_step(p, c);
  EXPECT_EQ(r.next.pc(), 13u);
  EXPECT_EQ(r.next.sp(), 104u);
  EXPECT_EQ(r.obs, O::ret(13));
}

TEST(NsStep, CallPushesReturnAddress) {
  auto p = parse_program("F:\nret\nMain:\nskip\ncall F\n");
  auto c = start(p);
  c.set_pc(2);
  auto r = ns_step(p, c);
  EXPECT_EQ(r.next.pc(), 0u);
  EXPECT_EQ(r.next.sp(), 0x1000u - 8);
  EXPECT_EQ(r.next.mem(0x1000 - 8), 3u);
  EXPECT_EQ(r.obs, O::call("F"));
}

TEST(NsStep, SilentForms) {
  auto p = parse_program("x <- 4\ncmov y, 9, x\ncmov z, 9, 0\nspbarr\nskip\njmp 1 + 5\n");
  auto b = ns_behavior(p, start(p), 100);
  EXPECT_EQ(b.trace, (Trace{O::pc(6)}));
  EXPECT_EQ(b.final_state.reg("x"), 4u);
  EXPECT_EQ(b.final_state.reg("y"), 9u);
  EXPECT_EQ(b.final_state.reg("z"), 0u);
  EXPECT_EQ(b.status, RunStatus::terminated);
  EXPECT_EQ(b.steps, 6u);
}

TEST(NsStep, TerminatedOutsideProgram) {
  auto p = parse_program("skip\n");
  auto c = start(p);
  c.set_pc(5);
  EXPECT_EQ(ns_step(p, c).status, StepStatus::terminated);
}

TEST(NsBehavior, Skip) {
  auto p = parse_program("skip\n");
  auto b = ns_behavior(p, start(p), 10);
  EXPECT_TRUE(b.trace.empty());
  EXPECT_EQ(b.status, RunStatus::terminated);
  EXPECT_EQ(b.steps, 1u);
}

TEST(NsBehavior, FuelZero) {
  auto p = parse_program("store x, 1\n");
  auto b = ns_behavior(p, start(p), 0);
  EXPECT_TRUE(b.trace.empty());
  EXPECT_EQ(b.status, RunStatus::fuel_exhausted);
}

TEST(NsBehavior, BranchAndStoreListing) {
  auto p = parse_program(R"(
Main:
  x <- 0
  store sec, p
  store pub, p
  beqz x, End
  load v, p
  load t, arr + v
End:
)");
  for (Value pv : {0, 3, 40}) {
    auto b = ns_behavior(p, start(p, {{Location::of_reg("p"), pv}, {Location::of_reg("sec"), 9}}), 100);
    EXPECT_EQ(b.trace, (Trace{O::store(pv), O::store(pv), O::pc(6)}));
    EXPECT_EQ(b.status, RunStatus::terminated);
  }
}

TEST(NsBehavior, Loop) {
  auto p = parse_program("L:\njmp L\n");
  auto b = ns_behavior(p, start(p), 5);
  EXPECT_EQ(b.status, RunStatus::fuel_exhausted);
  EXPECT_EQ(b.trace.size(), 5u);
}

TEST(Project, Examples) {
  EXPECT_TRUE(ns_project(Trace{}).empty());
  Trace t{O::store(3), O::start(Source::B, 0), O::load(5), O::rollback(Source::B, 0), O::pc(9)};
  EXPECT_EQ(ns_project(t), (Trace{O::store(3), O::pc(9)}));
  Trace nested{O::start(Source::S, 1), O::start(Source::B, 2), O::pc(5), O::rollback(Source::B, 2),
               O::rollback(Source::S, 1)};
  EXPECT_TRUE(ns_project(nested).empty());
}

TEST(Project, SkipAndUnclosed) {
  Trace t{O::store(1), O::start(Source::S, 0), O::skip(0), O::load(2), O::rollback(Source::S, 0),
          O::load(4), O::start(Source::B, 1), O::load(7)};
  EXPECT_EQ(ns_project(t), (Trace{O::store(1), O::load(4)}));
}

TEST(Project, Malformed) {
  EXPECT_THROW(ns_project(Trace{O::rollback(Source::B, 0)}), BracketError);
  EXPECT_THROW(ns_project(Trace{O::start(Source::B, 0), O::rollback(Source::S, 0)}), BracketError);
  EXPECT_THROW(ns_project(Trace{O::start(Source::B, 0), O::start(Source::S, 1),
                                O::rollback(Source::B, 0), O::rollback(Source::S, 1)}),
               BracketError);
}

TEST(Project, OntoSource) {
  Trace t{O::load(1),
          O::start(Source::B, 0),
          O::load(2),
          O::start(Source::S, 1),
          O::skip(3),
          O::load(4),
          O::rollback(Source::S, 1),
          O::rollback(Source::B, 0),
          O::start(Source::S, 2),
          O::skip(5),
          O::rollback(Source::S, 2)};
  EXPECT_EQ(project_trace(t, Source::S),
            (Trace{O::load(1), O::start(Source::S, 2), O::skip(5), O::rollback(Source::S, 2)}));
  EXPECT_EQ(project_trace(t, Source::B),
            (Trace{O::load(1), O::start(Source::B, 0), O::load(2), O::rollback(Source::B, 0)}));
}

TEST(Project, Idempotent) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> d(0, 5);
  for (int round = 0; round < 500; ++round) {
    Trace t;
    std::vector<std::pair<Source, std::uint64_t>> open;
    std::uint64_t id = 0;
    for (int i = 0; i < 20; ++i) {
      int k = d(rng);
      if (k == 0) {
        auto s = Source(d(rng) % 3);
        open.push_back({s, id});
        t.push_back(O::start(s, id++));
      } else if (k == 1 && !open.empty()) {
        t.push_back(O::rollback(open.back().first, open.back().second));
        open.pop_back();
      } else if (k == 2) {
        t.push_back(O::skip(Value(i)));
      } else {
        t.push_back(O::load(Value(i)));
      }
    }
    auto once = ns_project(t);
    EXPECT_EQ(ns_project(once), once);
    for (const auto& o : once) EXPECT_FALSE(o.is_marker());
  }
}

TEST(Trace, CanonicalIds) {
  Trace t{O::start(Source::B, 7), O::rollback(Source::B, 7), O::start(Source::S, 3),
          O::rollback(Source::S, 3)};
  EXPECT_EQ(canonicalize_ids(t), (Trace{O::start(Source::B, 0), O::rollback(Source::B, 0),
                                        O::start(Source::S, 1), O::rollback(Source::S, 1)}));
}

TEST(Trace, Json) {
  Trace t{O::load(5), O::store(6), O::pc(7), O::call("F"), O::ret(8), O::start(Source::B, 0),
          O::skip(2), O::rollback(Source::B, 0), O::pathcond(1)};
  auto s = trace_to_json(t);
  EXPECT_EQ(s.rfind(R"([{"t":"load","addr":5},{"t":"store","addr":6},)", 0), 0u);
  EXPECT_NE(s.find(R"({"t":"start","src":"B","id":0})"), std::string::npos);
  EXPECT_EQ(trace_from_json(s), t);
  EXPECT_THROW(trace_from_json(R"([{"t":"bogus"}])"), std::invalid_argument);
}

TEST(NsBehavior, DeterministicOnRandomPrograms) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    auto rp = testing::random_program(rng);
    auto in = testing::random_inputs(rng, rp.program, Width{});
    auto c = make_initial_configuration(rp.program, rp.policy, Width{}, in);
    auto a = ns_behavior(rp.program, c, 1000);
    auto b = ns_behavior(rp.program, c, 1000);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.status, RunStatus::terminated) << print_program(rp.program);
  }
}

}  // namespace
}  // namespace specomp
