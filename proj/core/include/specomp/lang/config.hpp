#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specomp/lang/ast.hpp"
#include "specomp/lang/policy.hpp"

namespace specomp {

/// Records the input locations a run read without having a value for them.
/// Used by the exhaustive checkers to discover which inputs matter.
class InputRecorder {
 public:
  void miss(const Location& loc) {
    for (const auto& l : misses_)
      if (l == loc) return;
    misses_.push_back(loc);
  }
  const std::vector<Location>& misses() const { return misses_; }

 private:
  std::vector<Location> misses_;
};

/// Initial values of every register and memory cell. Listed cells hold their
/// value; every other cell reads as 0 and is reported to the recorder.
struct InitialState {
  std::map<std::string, Value> registers;
  std::map<Addr, Value> memory;
  InputRecorder* recorder = nullptr;

  Value read(const Location& loc) const;
};

/// Concrete configuration ⟨m, a⟩. Cells absent from the maps hold their
/// initial value. pc and sp are always present in `regs`.
class Configuration {
 public:
  Configuration() = default;
  Configuration(std::shared_ptr<const InitialState> init, Width width);

  Value reg(const std::string& name) const;
  Value mem(Addr a) const;
  Value pc() const { return regs_.at(std::string(kPcReg)); }
  Value sp() const { return regs_.at(std::string(kSpReg)); }
  Width width() const { return width_; }

  Configuration& set_reg(const std::string& name, Value v);
  Configuration& set_mem(Addr a, Value v);
  Configuration& set_pc(Value v) { return set_reg(std::string(kPcReg), v); }

  Value eval(const Expr& e) const;

  const std::map<std::string, Value>& written_regs() const { return regs_; }
  const std::map<Addr, Value>& written_mem() const { return mem_; }
  const std::shared_ptr<const InitialState>& initial() const { return init_; }

  /// Structural equality of register file and memory (including initial values).
  friend bool operator==(const Configuration& a, const Configuration& b);

 private:
  std::map<std::string, Value> regs_;
  std::map<Addr, Value> mem_;
  std::shared_ptr<const InitialState> init_;
  Width width_;
};

/// Default initial stack pointer for a width: 0x1000, or half the address
/// space when the width is too small to hold it.
Value default_stack_pointer(Width w);

/// Builds the initial configuration of a run: pc at the program entry, sp from
/// the policy or the default, fixed values from the policy, and the given
/// values for the remaining inputs.
Configuration make_initial_configuration(const Program& p, const Policy& policy, Width w,
                                         const std::map<Location, Value>& inputs = {},
                                         InputRecorder* recorder = nullptr);

/// σ1 ∼P σ2: agreement on every public register and public memory cell.
bool low_equivalent(const Configuration& a, const Configuration& b, const Policy& policy);

}  // namespace specomp
