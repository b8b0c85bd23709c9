#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specomp/specsem/am.hpp"

namespace specomp {

class SelectorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A speculative semantics: one source alone, or a composition of two or
/// three sources with the canonical exclusion sets.
struct CombinedDescriptor {
  std::vector<Source> sources;  // in B, S, R order
  Participants parts;

  std::string name() const;  // e.g. "b+s"
  bool contains(Source s) const { return parts.has(s); }
  bool is_single() const { return sources.size() == 1; }
};

/// Z for each participant: the union of the other participants' relevant kinds.
Participants canonical_participants(const std::vector<Source>& sources);

/// Parses `b`, `s`, `r`, `b+s`, `s+r`, `b+r`, `b+s+r` (any order, any case).
CombinedDescriptor parse_selector(std::string_view text);

/// The seven semantics: b, s, r, b+s, s+r, b+r, b+s+r.
const std::vector<CombinedDescriptor>& all_semantics();

/// Instance fields of a source: rsb belongs to R only.
template <class D>
Frame<D> project_instance(const Frame<D>& f, const CombinedDescriptor& from, Source target) {
  if (!from.contains(target)) throw SelectorError("project_instance: source is not a participant");
  Frame<D> out = f;
  if (target != Source::R) out.rsb.reset();
  return out;
}

/// Re-attaches the fields `projected` lacks from `original`.
template <class D>
Frame<D> embed_instance(const Frame<D>& projected, const Frame<D>& original) {
  Frame<D> out = projected;
  if (!out.rsb) out.rsb = original.rsb;
  return out;
}

template <class D>
std::vector<Frame<D>> project_stack(const std::vector<Frame<D>>& stack, const CombinedDescriptor& from,
                                    Source target) {
  std::vector<Frame<D>> out;
  for (const auto& f : stack) out.push_back(project_instance(f, from, target));
  return out;
}

/// Concrete combined run (the closure of the combined step).
AmResult combined_run(const CombinedDescriptor& d, const Program& p, const Configuration& sigma0,
                      const AmParams& params);
std::vector<SymAmLeaf> combined_sym_run(const CombinedDescriptor& d, const Program& p,
                                        const SymConfig& sigma0, const AmParams& params,
                                        const Solver& solver);

struct ConfluenceReport {
  std::uint64_t states_checked = 0;
  std::uint64_t multi_delegate_states = 0;
  struct Divergence {
    Addr pc = 0;
    InstrKind instr = InstrKind::skip;
    Source first = Source::B;
    Source second = Source::B;
    std::string detail;
  };
  std::optional<Divergence> divergence;
  bool ok() const { return !divergence.has_value(); }
};

/// Replays the combined run; wherever several participants may step, runs
/// each of them and requires identical successors and observations.
ConfluenceReport check_confluence(const Program& p, const Configuration& sigma0, const Participants& parts,
                                  const AmParams& params);

struct ProjectionReport {
  std::uint64_t comparisons = 0;
  struct Mismatch {
    Source source = Source::B;
    Trace projected;
    Trace solo;
  };
  std::optional<Mismatch> mismatch;
  bool ok() const { return !mismatch.has_value(); }
};

/// For each participant x: project_trace(combined trace, x) equals the trace
/// of x alone, transaction ids canonicalized. Runs that exhaust fuel on
/// either side are skipped.
ProjectionReport check_projection_preservation(const CombinedDescriptor& d, const Program& p,
                                               const Configuration& sigma0, const AmParams& params);

bool same_state(const AmState<ConcreteDomain>& a, const AmState<ConcreteDomain>& b);

}  // namespace specomp
