#pragma once

#include <map>
#include <vector>

#include "specomp/lang/config.hpp"

namespace specomp {

using Inputs = std::map<Location, Value>;

/// Enumerates every distinct run over inputs drawn from {0, ..., domain-1}.
///
/// `run(inputs, recorder)` executes once with the given partial inputs and
/// must report every location it read without a value to `recorder`. When a
/// run misses a location, the search branches on that location's values;
/// runs without misses are complete and go to `leaf(inputs, result)`. Each
/// total input assignment agrees with exactly one leaf on what that leaf
/// read. Leaves arrive in lexicographic order of the branched values.
template <class Run, class Leaf>
void enumerate_inputs(Value domain, Run&& run, Leaf&& leaf, Inputs start = {}) {
  std::vector<Inputs> work{std::move(start)};
  while (!work.empty()) {
    Inputs in = std::move(work.back());
    work.pop_back();
    InputRecorder rec;
    auto result = run(in, &rec);
    if (rec.misses().empty()) {
      leaf(in, std::move(result));
      continue;
    }
    const Location loc = rec.misses().front();
    for (Value v = domain; v-- > 0;) {
      Inputs next = in;
      next[loc] = v;
      work.push_back(std::move(next));
    }
  }
}

}  // namespace specomp
