#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "specomp/compose/compose.hpp"
#include "specomp/lang/parser.hpp"
#include "specomp/sni/sni.hpp"

using namespace specomp;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(SPECOMP_CORPUS_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Case {
  Program program;
  Policy policy;
};

const Case& comb(int i) {
  static const std::vector<Case> cases = [] {
    std::vector<Case> v;
    for (const char* n : {"listing1", "call_branch", "call_store", "all_three"})
      v.push_back({parse_program(slurp(std::string("comb/") + n + ".muasm")),
                   Policy::from_json(slurp(std::string("comb/") + n + ".policy.json"))});
    return v;
  }();
  return cases[std::size_t(i)];
}

const char* kCombNames[] = {"listing1", "call_branch", "call_store", "all_three"};

void BM_Parse(benchmark::State& state) {
  const std::string src = slurp("comb/all_three.muasm");
  for (auto _ : state) benchmark::DoNotOptimize(parse_program(src));
}
BENCHMARK(BM_Parse);

// One always-mispredict run from the policy's initial state, by semantics.
void BM_CombinedRun(benchmark::State& state) {
  const auto& c = comb(3);
  const auto& sem = all_semantics()[std::size_t(state.range(0))];
  auto sigma = make_initial_configuration(c.program, c.policy, Width{});
  std::size_t len = 0;
  for (auto _ : state) len = combined_run(sem, c.program, sigma, {}).trace.size();
  state.SetLabel(sem.name() + ", trace length " + std::to_string(len));
}
BENCHMARK(BM_CombinedRun)->DenseRange(0, 6);

void BM_WindowScaling(benchmark::State& state) {
  const auto& c = comb(0);
  AmParams params;
  params.window = std::uint64_t(state.range(0));
  auto sigma = make_initial_configuration(c.program, c.policy, Width{});
  const auto sem = parse_selector("b+s");
  for (auto _ : state) benchmark::DoNotOptimize(combined_run(sem, c.program, sigma, params));
}
BENCHMARK(BM_WindowScaling)->RangeMultiplier(2)->Range(1, 64);

void BM_CheckConcrete(benchmark::State& state) {
  const auto& c = comb(int(state.range(0)));
  const auto sem = parse_selector("b+s+r");
  for (auto _ : state) benchmark::DoNotOptimize(check_sni_concrete(c.program, c.policy, sem, {}));
  state.SetLabel(kCombNames[state.range(0)]);
}
BENCHMARK(BM_CheckConcrete)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_CheckSymbolic(benchmark::State& state) {
  const auto& c = comb(int(state.range(0)));
  const auto sem = parse_selector("b+s+r");
  for (auto _ : state) benchmark::DoNotOptimize(check_sni_symbolic(c.program, c.policy, sem, {}));
  state.SetLabel(kCombNames[state.range(0)]);
}
BENCHMARK(BM_CheckSymbolic)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_DomainBits(benchmark::State& state) {
  const auto& c = comb(0);
  CheckOptions opt;
  opt.domain_bits = unsigned(state.range(0));
  const auto sem = parse_selector("b+s");
  for (auto _ : state) benchmark::DoNotOptimize(check_sni_concrete(c.program, c.policy, sem, opt));
}
BENCHMARK(BM_DomainBits)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
