#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "specomp/specsem/am.hpp"

namespace specomp {

/// Recent speculation-relevant outcomes: (pc, taken / bypassed), oldest first.
struct History {
  std::deque<std::pair<Addr, bool>> entries;
  std::size_t limit = 16;

  void push(Addr pc, bool outcome) {
    entries.emplace_back(pc, outcome);
    while (entries.size() > limit) entries.pop_front();
  }
  friend bool operator==(const History&, const History&) = default;
};

struct BranchQuery {
  Addr pc = 0;
  const History* history = nullptr;
  /// The resolved outcome. Lets a family express "predict correctly" and
  /// "always mispredict" next to purely history-based predictors.
  bool actual_taken = false;
};

struct Prediction {
  bool choice = false;  // branch: predicted taken; store: bypass
  std::uint64_t window = 0;
};

/// An explicit predictor. R never chooses a return target: the RSB does.
struct Oracle {
  std::string name;
  std::function<Prediction(const BranchQuery&)> branch;
  std::function<Prediction(Addr pc, const History&)> store;
  std::function<std::uint64_t(const History&)> ret;
};

struct OracleParams {
  std::uint64_t window = 12;  // upper bound on any window the oracle picks
  std::size_t rsb_size = 8;
  std::uint64_t fuel = 100000;
  std::size_t history = 16;
};

/// Speculates only where the oracle mispredicts. A correct prediction
/// pushes no transaction: its instructions run as ordinary steps, so the
/// trace carries no markers for it.
AmResult oracle_run(const Program& p, const Configuration& sigma0, const Participants& parts,
                    const Oracle& oracle, const OracleParams& params);

/// Always predicts the resolved outcome and never bypasses.
Oracle never_mispredict_oracle();

/// Prediction choices for up to two speculation sites per source, crossed
/// with the given windows. Sites past the second reuse the second one's
/// choice. Covers never-mispredict, always-taken and always-not-taken.
std::vector<Oracle> oracle_family(const Program& p, const Participants& parts,
                                  const std::vector<std::uint64_t>& windows);

}  // namespace specomp
