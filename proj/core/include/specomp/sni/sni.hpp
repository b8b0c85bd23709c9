#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "specomp/compose/compose.hpp"
#include "specomp/lang/policy.hpp"
#include "specomp/nonspec/inputs.hpp"
#include "specomp/specsem/oracle.hpp"

namespace specomp {

enum class VerdictStatus : std::uint8_t { secure, insecure, inconclusive };

std::string_view to_string(VerdictStatus s);

/// Two low-equivalent initial states whose runs agree non-speculatively but
/// not speculatively. Inputs list the locations each run read; anything else
/// reads 0 (policy-fixed cells excepted).
struct Witness {
  Inputs inputs1;
  Inputs inputs2;
  Trace trace1;
  Trace trace2;
  std::size_t first_difference = 0;
};

struct CheckStats {
  std::uint64_t runs = 0;
  std::uint64_t leaves = 0;
  std::uint64_t pairs_compared = 0;
  std::uint64_t solver_queries = 0;
  std::uint64_t max_steps = 0;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::secure;
  std::optional<Witness> witness;
  CheckStats stats;
  std::string diagnosis;
};

struct CheckOptions {
  AmParams am;
  Width width{};
  unsigned domain_bits = 2;
  unsigned threads = 1;
};

/// Exhaustive concrete check over inputs drawn from the domain.
Verdict check_sni_concrete(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                           const CheckOptions& opt);

using Runner = std::function<AmResult(const Configuration&)>;

/// The concrete check for any deterministic run function.
Verdict check_sni_with(const Program& p, const Policy& policy, const Runner& runner, const CheckOptions& opt);

/// Self-composition over symbolic runs, decided by the exhaustive solver.
Verdict check_sni_symbolic(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                           const CheckOptions& opt);

/// Re-runs both sides of a witness and re-checks low equivalence, equal
/// non-speculative projections and different speculative traces.
bool replay_witness(const Witness& w, const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                    const CheckOptions& opt);

struct OverapproxReport {
  VerdictStatus am_verdict = VerdictStatus::secure;
  std::size_t oracles_checked = 0;  // 0 unless the always-mispredict check said secure
  std::optional<std::string> counterexample;
  std::optional<Witness> witness;
  bool ok() const { return !counterexample.has_value(); }
};

/// When `sem` finds the program secure, checks SNI under each oracle of
/// the family with the same participants and reports the first that leaks.
OverapproxReport check_oracle_overapprox(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                                         const std::vector<Oracle>& family, const CheckOptions& opt);

/// Index of the first position where two traces differ (the shorter length
/// when one is a prefix of the other).
std::size_t first_difference(const Trace& a, const Trace& b);

}  // namespace specomp
