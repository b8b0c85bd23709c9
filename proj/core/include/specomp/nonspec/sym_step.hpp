#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "specomp/lang/ast.hpp"
#include "specomp/lang/policy.hpp"
#include "specomp/nonspec/observation.hpp"
#include "specomp/nonspec/solver.hpp"
#include "specomp/nonspec/step.hpp"

namespace specomp {

using SymObservation = BasicObservation<SymExpr>;
using SymTrace = BasicTrace<SymExpr>;

bool same(const SymObservation& a, const SymObservation& b);
bool same(const SymTrace& a, const SymTrace& b);
std::string to_string(const SymObservation& o);
std::string to_string(const SymTrace& t);

/// Initial values for symbolic runs: fixed cells are literals, every other
/// cell is the symbol of its location. Secret symbols carry `copy`.
struct SymInitial {
  std::map<std::string, Value> registers;
  std::map<Addr, Value> memory;
  Policy policy;
  unsigned copy = 0;

  SymExpr read(const Location& loc) const;
};

/// Symbolic configuration. pc is always concrete.
class SymConfig {
 public:
  SymConfig() = default;
  SymConfig(std::shared_ptr<const SymInitial> init, Value pc, Width width);

  Value pc() const { return pc_; }
  SymExpr reg(const std::string& name) const;
  SymExpr mem(Addr a) const;
  Width width() const { return width_; }

  SymConfig& set_pc(Value v) {
    pc_ = width_.wrap(v);
    return *this;
  }
  SymConfig& set_reg(const std::string& name, SymExpr v);
  SymConfig& set_mem(Addr a, SymExpr v);

  SymExpr eval(const Expr& e) const;

  const std::map<std::string, SymExpr>& written_regs() const { return regs_; }
  const std::map<Addr, SymExpr>& written_mem() const { return mem_; }

 private:
  std::shared_ptr<const SymInitial> init_;
  std::map<std::string, SymExpr> regs_;
  std::map<Addr, SymExpr> mem_;
  Value pc_ = 0;
  Width width_;
};

/// Initial symbolic configuration: pc at the entry, sp from the policy or the
/// default, policy-fixed cells as literals, everything else symbolic.
SymConfig make_initial_sym_config(const Program& p, const Policy& policy, Width w, unsigned copy = 0);

struct SymSuccessor {
  SymConfig config;
  PathCondition path;
  SymTrace obs;
};

struct SymStepResult {
  StepStatus status = StepStatus::ok;
  std::vector<SymSuccessor> next;
  std::string stuck_reason;
};

/// One symbolic step. Symbolic branch guards split on feasibility; symbolic
/// addresses, return targets and jump targets split on their feasible values,
/// each case recording pathcond(e = c) before the concrete observation.
SymStepResult sym_ns_step(const Program& p, const SymConfig& sigma, const PathCondition& path,
                          const Solver& solver);

struct SymLeaf {
  SymTrace trace;
  PathCondition path;
  RunStatus status = RunStatus::terminated;
};

/// All symbolic paths from σ~; fuel is per path.
std::vector<SymLeaf> sym_ns_behavior(const Program& p, const SymConfig& sigma0, const Solver& solver,
                                     std::uint64_t fuel);

/// Concrete traces described by a symbolic trace: every assignment over the
/// solver domain that satisfies its path conditions, instantiated, with the
/// pathcond markers removed.
std::set<Trace> concretize(const SymTrace& t, const Solver& solver);

/// Instantiates a symbolic trace under a full assignment, dropping pathconds.
Trace instantiate(const SymTrace& t, const Assignment& a, Width w);

}  // namespace specomp
