// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "specomp/compose/compose.hpp"
#include "specomp/lang/parser.hpp"
#include "specomp/nonspec/step.hpp"
#include "specomp/sni/sni.hpp"
#include "support/goldens.hpp"
#include "support/listings.hpp"
#include "support/oracles.hpp"
#include "support/random_program.hpp"

using namespace specomp;
namespace st = specomp::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Matrix = std::map<std::string, std::map<std::string, VerdictStatus>>;  // program -> sem -> verdict

tools::Corpus& corpus() {
  static tools::Corpus c = tools::load_corpus(st::corpus_dir());
  return c;
}

Outcome suite_matches(const std::string& name, std::size_t expected_cells) {
  const tools::Suite* s = corpus().suite(name);
  if (!s) return {false, "suite missing from the manifest"};
  auto t0 = std::chrono::steady_clock::now();
  auto cells = tools::run_cells(corpus(), {s}, {}, tools::Mode::concrete, "", 1);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t mismatches = 0, unexpected = 0;
  std::string first;
  for (const auto& c : cells) {
    if (!c.expected) ++unexpected;
    if (!c.matches()) {
      if (first.empty()) first = "; first mismatch " + c.which->name + " under " + c.sem;
      ++mismatches;
    }
  }
  std::ostringstream d;
  d << cells.size() << " cells, " << mismatches << " mismatches" << (secs < 60 ? "" : ", over 60 s") << first;
  return {cells.size() == expected_cells && mismatches == 0 && unexpected == 0 && secs < 60, d.str()};
}

Outcome goldens() {
  std::size_t ok = 0;
  std::string first;
  auto cases = st::golden_cases();
  for (const auto& g : cases) {
    auto t = combined_run(parse_selector(g.sem), g.listing.program,
                          make_initial_configuration(g.listing.program, g.listing.policy, Width{}, g.inputs), {})
                 .trace;
    std::string why;
    if (st::matches_skeleton(t, g.pattern, &why)) ++ok;
    else if (first.empty()) first = "; " + g.name + ": " + why;
  }
  return {ok == cases.size(), std::to_string(ok) + "/" + std::to_string(cases.size()) + " skeletons" + first};
}

Outcome ns_consistency() {
  std::mt19937_64 rng(1001);
  std::size_t runs = 0, bad = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    auto rp = st::random_program(rng);
    auto sigma = make_initial_configuration(rp.program, rp.policy, Width{}, st::random_inputs(rng, rp.program, Width{}));
    auto ns = ns_behavior(rp.program, sigma, 1000000);
    for (const auto& d : all_semantics()) {
      auto r = combined_run(d, rp.program, sigma, {});
      ++runs;
      if (r.status != RunStatus::terminated || ns_project(r.trace) != ns.trace) {
        if (first.empty()) first = "; first failure under " + d.name() + ":\n" + print_program(rp.program);
        ++bad;
      }
    }
  }
  return {bad == 0, "1000 programs x 7 semantics, " + std::to_string(bad) + " of " + std::to_string(runs) +
                        " runs differ" + first};
}

Outcome symbolic_consistency() {
  std::mt19937_64 rng(2002);
  std::size_t bad = 0, compared = 0;
  std::string first;
  AmParams params;
  params.window = 6;
  for (int i = 0; i < 200; ++i) {
    st::GenOptions gen;
    gen.max_instructions = 12;
    gen.registers = 2;
    auto rp = st::random_program(rng, gen);
    for (const auto& d : all_semantics()) {
      ++compared;
      if (st::sym_am_behaviors(d, rp.program, rp.policy, params, Width{}, 2) !=
          st::am_behaviors(d, rp.program, rp.policy, params, Width{}, 4)) {
        if (first.empty()) first = "; first failure under " + d.name() + ":\n" + print_program(rp.program);
        ++bad;
      }
    }
  }
  return {bad == 0, "200 programs x 7 semantics over a 2-bit domain, " + std::to_string(bad) + " of " +
                        std::to_string(compared) + " behavior sets differ" + first};
}

Outcome well_formedness() {
  std::vector<CombinedDescriptor> comps;
  for (const auto& d : all_semantics())
    if (!d.is_single()) comps.push_back(d);
  std::size_t checks = 0, violations = 0;
  std::string first;
  auto check = [&](const std::string& what, const Program& p, const Configuration& sigma, const CombinedDescriptor& d) {
    ++checks;
    auto c = check_confluence(p, sigma, d.parts, {});
    auto pr = check_projection_preservation(d, p, sigma, {});
    if (!c.ok() || !pr.ok()) {
      ++violations;
      if (first.empty()) first = "; " + what + " under " + d.name() + (c.ok() ? ": projection" : ": confluence");
    }
  };
  for (const auto& l : st::corpus_programs())
    for (const auto& d : comps)
      for (const auto& in : st::leaf_inputs(d, l.program, l.policy, {}, Width{}, 2, 8))
        check(l.name, l.program, make_initial_configuration(l.program, l.policy, Width{}, in), d);
  std::mt19937_64 rng(3003);
  for (int i = 0; i < 500; ++i) {
    auto rp = st::random_program(rng);
    auto sigma = make_initial_configuration(rp.program, rp.policy, Width{}, st::random_inputs(rng, rp.program, Width{}));
    for (const auto& d : comps) check("random program " + std::to_string(i), rp.program, sigma, d);
  }
  // Negative control: S may execute the branch, so the two delegates disagree there.
  auto l1 = st::listing(1);
  Participants broken = parse_selector("b+s").parts;
  broken.z[std::size_t(Source::S)] = KindSet{};
  auto control = check_confluence(l1.program, make_initial_configuration(l1.program, l1.policy, Width{}), broken, {});
  const bool control_ok = !control.ok() && control.divergence->instr == InstrKind::beqz;
  std::ostringstream d;
  d << checks << " confluence + projection checks, " << violations << " violations; broken-Z control "
    << (control_ok ? "diverges at the branch" : "did not diverge at the branch") << first;
  return {violations == 0 && control_ok, d.str()};
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& contained_in() {
  // participant -> compositions containing it
  static const std::vector<std::pair<std::string, std::vector<std::string>>> m = {
      {"b", {"b+s", "b+r", "b+s+r"}},
      {"s", {"b+s", "s+r", "b+s+r"}},
      {"r", {"s+r", "b+r", "b+s+r"}},
      {"b+s", {"b+s+r"}},
      {"s+r", {"b+s+r"}},
      {"b+r", {"b+s+r"}},
  };
  return m;
}

CheckOptions options_for(const std::string& program_name) {
  // Per-case parameters from the manifest (only the STL window override today).
  tools::RunParams params = corpus().defaults;
  for (const auto& s : corpus().suites)
    for (const auto& c : s.cases)
      if (s.name + "/" + std::filesystem::path(c.program_path).stem().string() == program_name)
        params = c.params.over(corpus().defaults);
  return params.options();
}

Matrix verdict_matrix(tools::Mode mode) {
  Matrix m;
  for (const auto& l : st::corpus_programs())
    for (const auto& d : all_semantics())
      m[l.name][d.name()] = tools::check(l.program, l.policy, d, options_for(l.name), mode).status;
  return m;
}

Outcome monotonicity(const Matrix& m) {
  std::size_t pairs = 0, bad = 0, inconclusive = 0;
  std::string first;
  for (const auto& [prog, v] : m) {
    for (const auto& [part, comps] : contained_in()) {
      for (const auto& comp : comps) {
        ++pairs;
        const auto a = v.at(part), b = v.at(comp);
        if (a == VerdictStatus::inconclusive || b == VerdictStatus::inconclusive) {
          ++inconclusive;
          continue;
        }
        if (a == VerdictStatus::insecure && b == VerdictStatus::secure) {
          ++bad;
          if (first.empty()) first = "; " + prog + ": insecure under " + part + " but secure under " + comp;
        }
      }
    }
  }
  std::ostringstream d;
  d << m.size() << " programs x 7 semantics, " << pairs << " participant/composition pairs, " << bad
    << " violations, " << inconclusive << " inconclusive" << first;
  return {bad == 0 && inconclusive == 0, d.str()};
}

Outcome overapproximation() {
  const std::vector<std::uint64_t> windows{0, 1, 2, 4, 8, 12};
  std::size_t cells = 0, checked = 0, oracles = 0, counterexamples = 0;
  std::string first;
  for (const auto& l : st::corpus_programs()) {
    for (const auto& d : all_semantics()) {
      ++cells;
      auto family = oracle_family(l.program, d.parts, windows);
      auto r = check_oracle_overapprox(l.program, l.policy, d, family, options_for(l.name));
      if (r.am_verdict == VerdictStatus::secure) ++checked;
      oracles += r.oracles_checked;
      if (!r.ok()) {
        ++counterexamples;
        if (first.empty()) first = "; " + l.name + " under " + d.name() + " leaks with oracle " + *r.counterexample;
      }
    }
  }
  std::ostringstream d;
  d << cells << " cells, " << checked << " secure under always-mispredict, " << oracles << " oracle checks, "
    << counterexamples << " counterexamples" << first;
  return {counterexamples == 0 && checked > 0, d.str()};
}

Outcome mode_agreement(const Matrix& concrete) {
  auto cells = tools::run_cells(corpus(), [] {
    std::vector<const tools::Suite*> all;
    for (const auto& s : corpus().suites) all.push_back(&s);
    return all;
  }(), {}, tools::Mode::symbolic, "", 1);
  std::size_t disagree = 0, compared = 0;
  std::string first;
  for (const auto& c : cells) {
    const std::string prog = c.which->suite + "/" + std::filesystem::path(c.which->program_path).stem().string();
    ++compared;
    if (concrete.at(prog).at(c.sem) != c.verdict.status) {
      ++disagree;
      if (first.empty()) first = "; " + prog + " under " + c.sem;
    }
  }
  // The full 7-semantics matrix as well.
  auto symbolic = verdict_matrix(tools::Mode::symbolic);
  std::size_t matrix_disagree = 0;
  for (const auto& [prog, v] : concrete)
    for (const auto& [sem, verdict] : v)
      if (symbolic.at(prog).at(sem) != verdict) {
        ++matrix_disagree;
        if (first.empty()) first = "; " + prog + " under " + sem + " (matrix)";
      }
  std::ostringstream d;
  d << compared << " manifest cells, " << disagree << " disagreements; full matrix " << matrix_disagree
    << " disagreements" << first;
  return {disagree == 0 && matrix_disagree == 0, d.str()};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int n, const char* title, const std::function<Outcome()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %-34s %s  (%s; %.1f s)\n", n, title, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  };
  report(1, "comb matrix", [] { return suite_matches("comb", 56); });
  report(2, "store-bypass ports", [] { return suite_matches("stl", 26); });
  report(3, "return-stack ports", [] { return suite_matches("rsb", 15); });
  report(4, "golden trace skeletons", goldens);
  report(5, "non-speculative consistency", ns_consistency);
  report(6, "symbolic consistency", symbolic_consistency);
  report(7, "confluence and projection", well_formedness);
  Matrix concrete;
  report(8, "composition monotonicity", [&] {
    concrete = verdict_matrix(tools::Mode::concrete);
    return monotonicity(concrete);
  });
  report(9, "oracle overapproximation", overapproximation);
  report(10, "concrete/symbolic agreement", [&] {
    if (concrete.empty()) concrete = verdict_matrix(tools::Mode::concrete);
    return mode_agreement(concrete);
  });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
