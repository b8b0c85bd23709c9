#include "specomp/specsem/am.hpp"

namespace specomp {

std::optional<Source> owner_of(InstrKind k) {
  for (Source s : kAllSources)
    if (relevant_kinds(s).contains(k)) return s;
  return std::nullopt;
}

Participants Participants::single(Source s) {
  Participants p;
  p.active[std::size_t(s)] = true;
  return p;
}

namespace {

RunStatus run_status(AmStepStatus s) {
  return s == AmStepStatus::terminated ? RunStatus::terminated : RunStatus::stuck;
}

}  // namespace

AmResult am_run(const Program& p, const Configuration& sigma0, const Participants& parts,
                const AmParams& params, const AmObserver<ConcreteDomain>& observer) {
  AmEngine<ConcreteDomain> engine(p, parts, params);
  auto state = engine.initial(sigma0);
  AmResult r;
  const AmObserver<ConcreteDomain>* obs = observer ? &observer : nullptr;
  for (;;) {
    const bool at_instruction = p.at(state.stack.back().cfg.pc()) != nullptr;
    const bool would_rollback = state.stack.size() > 1 && (!at_instruction || *state.stack.back().window == 0);
    if (!would_rollback && at_instruction && state.steps == params.fuel) {
      r.status = RunStatus::fuel_exhausted;
      break;
    }
    auto out = engine.step(state, obs);
    if (out.status != AmStepStatus::ok) {
      r.status = run_status(out.status);
      break;
    }
    auto& t = out.next.front();
    r.trace.insert(r.trace.end(), t.obs.begin(), t.obs.end());
    state = std::move(t.state);
  }
  r.steps = state.steps;
  return r;
}

std::vector<SymAmLeaf> sym_am_run(const Program& p, const SymConfig& sigma0, const Participants& parts,
                                  const AmParams& params, const Solver& solver) {
  AmEngine<SymbolicDomain> engine(p, parts, params, SymbolicDomain{&solver});
  struct Item {
    AmState<SymbolicDomain> state;
    SymTrace trace;
  };
  std::vector<SymAmLeaf> leaves;
  std::vector<Item> work;
  work.push_back({engine.initial(sigma0), {}});
  while (!work.empty()) {
    Item it = std::move(work.back());
    work.pop_back();
    const auto& top = it.state.stack.back();
    const bool at_instruction = p.at(top.cfg.pc()) != nullptr;
    const bool would_rollback = it.state.stack.size() > 1 && (!at_instruction || *top.window == 0);
    if (!would_rollback && at_instruction && it.state.steps == params.fuel) {
      leaves.push_back({std::move(it.trace), it.state.path, RunStatus::fuel_exhausted});
      continue;
    }
    auto out = engine.step(it.state);
    if (out.status != AmStepStatus::ok) {
      leaves.push_back({std::move(it.trace), it.state.path, run_status(out.status)});
      continue;
    }
    for (auto t = out.next.rbegin(); t != out.next.rend(); ++t) {
      SymTrace trace = it.trace;
      trace.insert(trace.end(), t->obs.begin(), t->obs.end());
      work.push_back({std::move(t->state), std::move(trace)});
    }
  }
  return leaves;
}

}  // namespace specomp
