#include "specomp/compose/compose.hpp"

#include <algorithm>
#include <cctype>

namespace specomp {

std::string CombinedDescriptor::name() const {
  std::string out;
  for (Source s : sources) {
    if (!out.empty()) out += '+';
    out += char(std::tolower(to_string(s)[0]));
  }
  return out;
}

Participants canonical_participants(const std::vector<Source>& sources) {
  Participants p;
  for (Source s : sources) p.active[std::size_t(s)] = true;
  for (Source s : sources) {
    KindSet z;
    for (Source o : sources)
      if (o != s) z = z | relevant_kinds(o);
    p.z[std::size_t(s)] = z;
  }
  return p;
}

CombinedDescriptor parse_selector(std::string_view text) {
  std::array<bool, 3> seen{};
  std::size_t pos = 0;
  if (text.empty()) throw SelectorError("empty semantics selector");
  while (pos <= text.size()) {
    auto plus = text.find('+', pos);
    auto part = text.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    auto src = parse_source(part);
    if (!src) throw SelectorError("unknown speculation source '" + std::string(part) + "' in '" +
                                  std::string(text) + "'; expected b, s or r");
    if (seen[std::size_t(*src)]) throw SelectorError("source '" + std::string(part) + "' listed twice");
    seen[std::size_t(*src)] = true;
    if (plus == std::string_view::npos) break;
    pos = plus + 1;
  }
  CombinedDescriptor d;
  for (Source s : kAllSources)
    if (seen[std::size_t(s)]) d.sources.push_back(s);
  d.parts = canonical_participants(d.sources);
  return d;
}

const std::vector<CombinedDescriptor>& all_semantics() {
  static const std::vector<CombinedDescriptor> all = [] {
    std::vector<CombinedDescriptor> v;
    for (const char* s : {"b", "s", "r", "b+s", "s+r", "b+r", "b+s+r"}) v.push_back(parse_selector(s));
    return v;
  }();
  return all;
}

AmResult combined_run(const CombinedDescriptor& d, const Program& p, const Configuration& sigma0,
                      const AmParams& params) {
  return am_run(p, sigma0, d.parts, params);
}

std::vector<SymAmLeaf> combined_sym_run(const CombinedDescriptor& d, const Program& p,
                                        const SymConfig& sigma0, const AmParams& params,
                                        const Solver& solver) {
  return sym_am_run(p, sigma0, d.parts, params, solver);
}

bool same_state(const AmState<ConcreteDomain>& a, const AmState<ConcreteDomain>& b) {
  if (a.stack.size() != b.stack.size() || a.steps != b.steps) return false;
  for (std::size_t i = 0; i < a.stack.size(); ++i) {
    const auto& x = a.stack[i];
    const auto& y = b.stack[i];
    if (x.ctr != y.ctr || x.window != y.window || x.rsb != y.rsb || x.src != y.src || !(x.cfg == y.cfg))
      return false;
  }
  return true;
}

namespace {

bool same_outcome(const AmStepOutcome<ConcreteDomain>& a, const AmStepOutcome<ConcreteDomain>& b,
                  std::string& why) {
  if (a.status != b.status) {
    why = "different step status";
    return false;
  }
  if (a.next.size() != b.next.size()) {
    why = "different number of successors";
    return false;
  }
  for (std::size_t i = 0; i < a.next.size(); ++i) {
    if (a.next[i].obs != b.next[i].obs) {
      why = "observations " + to_string(a.next[i].obs) + " vs " + to_string(b.next[i].obs);
      return false;
    }
    if (!same_state(a.next[i].state, b.next[i].state)) {
      why = "successor states differ (stack heights " + std::to_string(a.next[i].state.stack.size()) +
            " vs " + std::to_string(b.next[i].state.stack.size()) + ")";
      return false;
    }
  }
  return true;
}

}  // namespace

ConfluenceReport check_confluence(const Program& p, const Configuration& sigma0, const Participants& parts,
                                  const AmParams& params) {
  AmEngine<ConcreteDomain> engine(p, parts, params);
  ConfluenceReport report;
  auto state = engine.initial(sigma0);
  while (state.steps < params.fuel) {
    ++report.states_checked;
    std::vector<std::pair<Source, AmStepOutcome<ConcreteDomain>>> applicable;
    for (Source x : kAllSources) {
      if (!parts.has(x)) continue;
      auto out = engine.step_as(state, x);
      if (out.status != AmStepStatus::not_applicable) applicable.emplace_back(x, std::move(out));
    }
    if (applicable.size() > 1) ++report.multi_delegate_states;
    for (std::size_t i = 1; i < applicable.size(); ++i) {
      std::string why;
      if (!same_outcome(applicable[0].second, applicable[i].second, why)) {
        const auto& cfg = state.stack.back().cfg;
        ConfluenceReport::Divergence d;
        d.pc = cfg.pc();
        if (const auto* ins = p.at(cfg.pc())) d.instr = kind_of(*ins);
        d.first = applicable[0].first;
        d.second = applicable[i].first;
        d.detail = why;
        report.divergence = d;
        return report;
      }
    }
    auto out = engine.step(state);
    if (out.status != AmStepStatus::ok) break;
    state = std::move(out.next.front().state);
  }
  return report;
}

ProjectionReport check_projection_preservation(const CombinedDescriptor& d, const Program& p,
                                               const Configuration& sigma0, const AmParams& params) {
  ProjectionReport report;
  auto combined = combined_run(d, p, sigma0, params);
  if (combined.status == RunStatus::fuel_exhausted) return report;
  for (Source x : d.sources) {
    auto solo = am_run(p, sigma0, Participants::single(x), params);
    if (solo.status == RunStatus::fuel_exhausted) continue;
    ++report.comparisons;
    auto projected = canonicalize_ids(project_trace(combined.trace, x));
    auto expected = canonicalize_ids(solo.trace);
    if (projected != expected) {
      report.mismatch = ProjectionReport::Mismatch{x, std::move(projected), std::move(expected)};
      return report;
    }
  }
  return report;
}

}  // namespace specomp
