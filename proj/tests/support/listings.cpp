#include "support/listings.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "specomp/lang/parser.hpp"

#ifndef SPECOMP_CORPUS_DIR
#define SPECOMP_CORPUS_DIR "corpus"
#endif

namespace specomp::testing {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Stack slots from the initial sp upwards hold a halt address, so a ret that
// pops past Main's frame terminates.
Policy halting_stack() {
  Policy pol;
  pol.public_memory.push_back({0x1000 - 512, 0x1000 + 512});
  for (Addr i = 0; i < 8; ++i) pol.init_memory[0x1000 + 8 * i] = 1000;
  return pol;
}

}  // namespace

std::string corpus_dir() { return SPECOMP_CORPUS_DIR; }

Listing corpus_program(const std::string& program, const std::string& policy) {
  const fs::path dir(corpus_dir());
  return {fs::path(program).stem().string(), parse_program(slurp(dir / program)),
          Policy::from_json(slurp(dir / policy))};
}

Listing listing(int n) {
  switch (n) {
    case 1: return corpus_program("comb/listing1.muasm", "comb/listing1.policy.json");
    case 2: {
      Listing l{"listing2", parse_program(R"(
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
)"),
                halting_stack()};
      return l;
    }
    case 3: {
      Listing l{"listing3", parse_program(R"(
Main:
  store sec, p
  store pub, p
  load v, p
  load t, b + v * 512
)"),
                {}};
      l.policy.public_registers = {"p", "pub", "b"};
      l.policy.init_registers = {{"p", 256}, {"pub", 1}, {"b", 1024}};
      return l;
    }
    case 4: return corpus_program("comb/call_store.muasm", "comb/call_store.policy.json");
    case 5: return corpus_program("comb/all_three.muasm", "comb/all_three.policy.json");
  }
  throw std::out_of_range("no listing " + std::to_string(n));
}

Listing call_branch_listing() { return corpus_program("comb/call_branch.muasm", "comb/call_branch.policy.json"); }

std::vector<Listing> corpus_programs() {
  auto manifest = nlohmann::json::parse(slurp(fs::path(corpus_dir()) / "manifest.json"));
  std::vector<Listing> out;
  std::set<std::string> seen;
  for (const auto& s : manifest.at("suites")) {
    for (const auto& c : s.at("cases")) {
      auto prog = c.at("program").get<std::string>();
      if (!seen.insert(prog).second) continue;
      auto l = corpus_program(prog, c.at("policy").get<std::string>());
      l.name = s.at("name").get<std::string>() + "/" + fs::path(prog).stem().string();
      out.push_back(std::move(l));
    }
  }
  return out;
}

}  // namespace specomp::testing
