#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "specomp/lang/ast.hpp"
#include "specomp/lang/config.hpp"
#include "specomp/nonspec/observation.hpp"

namespace specomp {

enum class StepStatus : std::uint8_t { ok, terminated, stuck };
enum class RunStatus : std::uint8_t { terminated, stuck, fuel_exhausted };

std::string_view to_string(RunStatus s);

struct StepResult {
  StepStatus status = StepStatus::ok;
  Configuration next;
  std::optional<Observation> obs;
  std::string stuck_reason;
};

/// One non-speculative step. Terminated when pc points outside the program.
StepResult ns_step(const Program& p, const Configuration& sigma);

struct Behavior {
  Trace trace;
  RunStatus status = RunStatus::terminated;
  Configuration final_state;
  std::uint64_t steps = 0;
};

Behavior ns_behavior(const Program& p, const Configuration& sigma0, std::uint64_t fuel);

}  // namespace specomp
