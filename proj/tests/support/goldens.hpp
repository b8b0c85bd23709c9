#pragma once

#include <string>
#include <vector>

#include "specomp/nonspec/inputs.hpp"
#include "support/listings.hpp"

namespace specomp::testing {

/// A displayed trace skeleton: the run of `sem` on `listing` from the
/// given inputs must match `pattern` (see matches_skeleton).
struct GoldenCase {
  std::string name;
  Listing listing;
  std::string sem;
  Inputs inputs;
  std::string pattern;
};

/// Addresses are those of the 0-based ports. The branch rule emits the
/// resolved target before start and the mispredicted one after it.
std::vector<GoldenCase> golden_cases();

}  // namespace specomp::testing
