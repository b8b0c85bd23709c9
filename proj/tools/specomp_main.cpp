// specomp: speculative execution semantics and SNI checking for μASM.
//
//   specomp run   PROGRAM [--policy FILE] [--sem SEL] ...
//   specomp check PROGRAM [--policy FILE] [--sem SEL] [--mode concrete|symbolic] ...
//   specomp corpus {stl|rsb|comb|all} [--sem SEL] ...
//
// Exit codes: 0 secure / clean run, 1 insecure (or a failed corpus cell),
// 2 parse, policy or usage error, 3 inconclusive.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "report.hpp"
#include "specomp/lang/parser.hpp"

#ifndef SPECOMP_CORPUS_DIR
#define SPECOMP_CORPUS_DIR "corpus"
#endif

using namespace specomp;
using namespace specomp::tools;

namespace {

constexpr int kExitSecure = 0;
constexpr int kExitInsecure = 1;
constexpr int kExitInput = 2;
constexpr int kExitInconclusive = 3;

struct Flags {
  std::string sem = "b+s+r";
  std::uint64_t window = 12;
  std::size_t rsb_size = 8;
  unsigned bits = 64;
  unsigned domain_bits = 2;
  std::uint64_t fuel = 100000;
  std::string mode = "concrete";
  std::string policy;
  bool json = false;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--sem", f.sem, "Semantics: b, s, r, b+s, s+r, b+r or b+s+r");
  cmd->add_option("--window", f.window, "Speculation window")->check(CLI::NonNegativeNumber);
  cmd->add_option("--rsb-size", f.rsb_size, "Return stack buffer entries")->check(CLI::NonNegativeNumber);
  cmd->add_option("--bits", f.bits, "Value width in bits")->check(CLI::Range(1, 64));
  cmd->add_option("--domain-bits", f.domain_bits, "Bits per enumerated input")->check(CLI::Range(1, 16));
  cmd->add_option("--fuel", f.fuel, "Step bound per run");
  cmd->add_option("--mode", f.mode, "Checker")->check(CLI::IsMember({"concrete", "symbolic"}));
  cmd->add_option("--policy", f.policy, "Security policy (JSON)");
  cmd->add_flag("--json", f.json, "Machine-readable output");
  cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 256u));
}

CheckOptions options_of(const Flags& f) {
  CheckOptions o;
  o.am.window = f.window;
  o.am.rsb_size = f.rsb_size;
  o.am.fuel = f.fuel;
  o.width = Width{f.bits};
  o.domain_bits = f.domain_bits;
  o.threads = f.threads;
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Input {
  Program program;
  Policy policy;
};

Input load_input(const std::string& program_path, const Flags& f) {
  if (f.domain_bits > f.bits) throw CLI::ValidationError("--domain-bits", "must not exceed --bits");
  Input in;
  in.program = parse_program(slurp(program_path));
  if (!f.policy.empty()) in.policy = load_policy_file(f.policy);
  return in;
}

int cmd_run(const std::string& path, const Flags& f) {
  auto in = load_input(path, f);
  auto sem = parse_selector(f.sem);
  auto opt = options_of(f);
  if (f.mode == "symbolic") {
    ExhaustiveSolver solver(std::min(f.domain_bits, f.bits), opt.width);
    auto leaves = combined_sym_run(sem, in.program, make_initial_sym_config(in.program, in.policy, opt.width),
                                   opt.am, solver);
    if (f.json) {
      ordered_json j;
      j["config"] = options_json(sem.name(), opt, Mode::symbolic);
      j["paths"] = ordered_json::array();
      for (const auto& l : leaves) {
        j["paths"].push_back({{"status", std::string(to_string(l.status))}, {"trace", to_string(l.trace)}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < leaves.size(); ++i)
        std::cout << "path " << i << " (" << to_string(leaves[i].status) << "): " << to_string(leaves[i].trace)
                  << "\n";
    }
    return kExitSecure;
  }
  auto sigma = make_initial_configuration(in.program, in.policy, opt.width);
  auto r = combined_run(sem, in.program, sigma, opt.am);
  auto ns = ns_project(r.trace);
  if (f.json) {
    ordered_json j;
    j["config"] = options_json(sem.name(), opt, Mode::concrete);
    j["status"] = std::string(to_string(r.status));
    j["steps"] = r.steps;
    j["trace"] = trace_json(r.trace);
    j["ns_trace"] = trace_json(ns);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: " << to_string(r.status) << " after " << r.steps << " steps\n";
    std::cout << "trace: " << to_string(r.trace) << "\n";
    std::cout << "non-speculative: " << to_string(ns) << "\n";
  }
  switch (r.status) {
    case RunStatus::terminated: return kExitSecure;
    case RunStatus::stuck: return kExitInsecure;
    case RunStatus::fuel_exhausted: return kExitInconclusive;
  }
  return kExitSecure;
}

int exit_of(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::secure: return kExitSecure;
    case VerdictStatus::insecure: return kExitInsecure;
    case VerdictStatus::inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

int cmd_check(const std::string& path, const Flags& f) {
  auto in = load_input(path, f);
  auto sem = parse_selector(f.sem);
  auto opt = options_of(f);
  const Mode mode = f.mode == "symbolic" ? Mode::symbolic : Mode::concrete;
  auto v = check(in.program, in.policy, sem, opt, mode);
  if (f.json) {
    auto j = verdict_json(v);
    j["config"] = options_json(sem.name(), opt, mode);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << describe(v);
  }
  return exit_of(v.status);
}

int cmd_corpus(const std::string& suite, const std::string& dir, const Flags& f, const CLI::App& sub) {
  auto corpus = load_corpus(dir);
  std::vector<const Suite*> suites;
  if (suite == "all") {
    for (const auto& s : corpus.suites) suites.push_back(&s);
  } else if (const Suite* s = corpus.suite(suite)) {
    suites.push_back(s);
  } else {
    throw CorpusError("no suite '" + suite + "' in " + dir);
  }
  // Only flags given on the command line override the manifest.
  RunParams over;
  if (sub.count("--window")) over.window = f.window;
  if (sub.count("--rsb-size")) over.rsb_size = f.rsb_size;
  if (sub.count("--bits")) over.bits = f.bits;
  if (sub.count("--domain-bits")) over.domain_bits = f.domain_bits;
  if (sub.count("--fuel")) over.fuel = f.fuel;
  const Mode mode = f.mode == "symbolic" ? Mode::symbolic : Mode::concrete;
  const std::string only = sub.count("--sem") ? f.sem : "";
  auto cells = run_cells(corpus, suites, over, mode, only, f.threads);

  std::size_t mismatches = 0;
  for (const auto& c : cells) mismatches += c.matches() ? 0 : 1;
  if (f.json) {
    ordered_json j;
    j["suite"] = suite;
    j["mode"] = to_string(mode);
    j["cells"] = ordered_json::array();
    for (const auto& c : cells) {
      ordered_json cell{{"suite", c.which->suite}, {"case", c.which->name}, {"sem", c.sem}};
      cell["verdict"] = std::string(to_string(c.verdict.status));
      if (c.expected) cell["expected"] = std::string(to_string(*c.expected));
      cell["matches"] = c.matches();
      j["cells"].push_back(std::move(cell));
    }
    j["mismatches"] = mismatches;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_table(cells);
    std::cout << "ok = secure, LEAK = insecure, ? = inconclusive; ! marks a cell that differs from the manifest, "
                 "* a cell without expectation\n";
    std::cout << cells.size() << " cells, " << mismatches << " mismatches\n";
  }
  return mismatches == 0 ? 0 : kExitInsecure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composable speculative semantics for μASM and a speculative non-interference checker"};
  app.require_subcommand(1);
  Flags f;
  std::string program, suite, corpus_dir = SPECOMP_CORPUS_DIR;

  auto* run = app.add_subcommand("run", "Print the trace of one run from the policy's initial state");
  run->add_option("program", program, "μASM source")->required();
  add_common(run, f);

  auto* chk = app.add_subcommand("check", "Check speculative non-interference");
  chk->add_option("program", program, "μASM source")->required();
  add_common(chk, f);

  auto* cor = app.add_subcommand("corpus", "Run a bundled benchmark suite against its expectations");
  cor->add_option("suite", suite, "stl, rsb, comb or all")->required();
  cor->add_option("--corpus-dir", corpus_dir, "Directory holding manifest.json");
  add_common(cor, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*run) return cmd_run(program, f);
    if (*chk) return cmd_check(program, f);
    return cmd_corpus(suite, corpus_dir, f, *cor);
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << program << ":" << d.line << ": " << d.message << "\n";
    return kExitInput;
  } catch (const PolicyError& e) {
    std::cerr << "policy error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SelectorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
