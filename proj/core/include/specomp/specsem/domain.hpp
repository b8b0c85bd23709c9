#pragma once

#include <vector>

#include "specomp/nonspec/step.hpp"
#include "specomp/nonspec/sym_step.hpp"

namespace specomp {

/// Adapters giving the speculative engine one interface over concrete and
/// symbolic non-speculative semantics.
struct ConcreteDomain {
  using Config = Configuration;
  using Val = Value;
  struct Path {};

  struct Succ {
    Config cfg;
    Path path;
    std::vector<Observation> obs;
  };
  struct Outcome {
    StepStatus status = StepStatus::ok;
    std::vector<Succ> next;
  };

  static Value pc(const Config& c) { return c.pc(); }
  static Config with_pc(Config c, Value v) { return std::move(c.set_pc(v)); }
  static Val lit(Value v) { return v; }

  Outcome step(const Program& p, const Config& c, const Path&) const {
    auto r = ns_step(p, c);
    Outcome o;
    o.status = r.status;
    if (r.status == StepStatus::ok) {
      Succ s{std::move(r.next), {}, {}};
      if (r.obs) s.obs.push_back(*r.obs);
      o.next.push_back(std::move(s));
    }
    return o;
  }
};

struct SymbolicDomain {
  using Config = SymConfig;
  using Val = SymExpr;
  using Path = PathCondition;

  struct Succ {
    Config cfg;
    Path path;
    std::vector<SymObservation> obs;
  };
  struct Outcome {
    StepStatus status = StepStatus::ok;
    std::vector<Succ> next;
  };

  const Solver* solver = nullptr;

  static Value pc(const Config& c) { return c.pc(); }
  static Config with_pc(Config c, Value v) { return std::move(c.set_pc(v)); }
  static Val lit(Value v) { return SymNode::lit(v); }

  Outcome step(const Program& p, const Config& c, const Path& path) const {
    auto r = sym_ns_step(p, c, path, *solver);
    Outcome o;
    o.status = r.status;
    for (auto& s : r.next) o.next.push_back({std::move(s.config), std::move(s.path), std::move(s.obs)});
    return o;
  }
};

}  // namespace specomp
