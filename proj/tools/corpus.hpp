#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specomp/sni/sni.hpp"

namespace specomp::tools {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Analysis knobs. Unset fields fall back to the next layer (case, then
/// manifest defaults, then built-ins).
struct RunParams {
  std::optional<std::uint64_t> window;
  std::optional<std::size_t> rsb_size;
  std::optional<unsigned> bits;
  std::optional<unsigned> domain_bits;
  std::optional<std::uint64_t> fuel;

  RunParams over(const RunParams& base) const;  // this, falling back to base
  CheckOptions options(unsigned threads = 1) const;
};

enum class Mode : std::uint8_t { concrete, symbolic };

std::optional<VerdictStatus> parse_verdict(std::string_view s);

struct CorpusCase {
  std::string suite;
  std::string name;
  std::string row;      // table row label
  std::string variant;  // "none", "fence", "retpoline", ...
  std::string program_path;
  std::string policy_path;
  std::string description;
  RunParams params;
  std::map<std::string, VerdictStatus> expect;  // selector -> verdict
};

struct Suite {
  std::string name;
  std::vector<std::string> semantics;
  std::vector<CorpusCase> cases;
};

struct Corpus {
  std::string dir;
  RunParams defaults;
  std::vector<Suite> suites;

  const Suite* suite(std::string_view name) const;
};

/// Reads `<dir>/manifest.json`. Paths in the result are absolute.
Corpus load_corpus(const std::string& dir);

struct LoadedCase {
  Program program;
  Policy policy;
};
LoadedCase load_case(const CorpusCase& c);

struct CellResult {
  const CorpusCase* which = nullptr;
  std::string sem;
  Verdict verdict;
  std::optional<VerdictStatus> expected;
  double seconds = 0;

  bool matches() const { return !expected || *expected == verdict.status; }
};

Verdict check(const Program& p, const Policy& policy, const CombinedDescriptor& sem, const CheckOptions& opt,
              Mode mode);

/// Every (case, semantics) cell of the given suites. `only_sem` restricts
/// the semantics; cells run on `threads` workers and come back in order.
std::vector<CellResult> run_cells(const Corpus& corpus, const std::vector<const Suite*>& suites,
                                  const RunParams& overrides, Mode mode, const std::string& only_sem,
                                  unsigned threads);

/// Row-per-program table with one column per (variant, semantics).
std::string format_table(const std::vector<CellResult>& cells);

}  // namespace specomp::tools
