#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specomp/lang/value.hpp"

namespace specomp {

/// Half-open address range [lo, hi).
struct AddrRange {
  Addr lo = 0;
  Addr hi = 0;
  bool contains(Addr a) const { return lo <= a && a < hi; }
  friend bool operator==(const AddrRange&, const AddrRange&) = default;
};

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Security policy: what the attacker may know. Everything not listed is
/// secret. pc and sp are always public. Initial values listed in
/// init_registers / init_memory are fixed for every run.
struct Policy {
  std::set<std::string> public_registers;
  std::vector<AddrRange> public_memory;
  std::map<Addr, Value> init_memory;
  std::map<std::string, Value> init_registers;

  bool is_public(const Location& loc) const;

  static Policy from_json(std::string_view text);
  std::string to_json() const;
};

Policy load_policy_file(const std::string& path);

}  // namespace specomp
