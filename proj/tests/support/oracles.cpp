#include "support/oracles.hpp"

#include "specomp/nonspec/sym_step.hpp"

namespace specomp {

void PrintTo(const Observation& o, std::ostream* os) { *os << to_string(o); }

}  // namespace specomp

namespace specomp::testing {

std::set<Trace> am_behaviors(const CombinedDescriptor& sem, const Program& p, const Policy& pol,
                             const AmParams& params, Width w, Value domain) {
  std::set<Trace> out;
  enumerate_inputs(
      domain,
      [&](const Inputs& in, InputRecorder* rec) {
        return combined_run(sem, p, make_initial_configuration(p, pol, w, in, rec), params).trace;
      },
      [&](const Inputs&, Trace t) { out.insert(std::move(t)); });
  return out;
}

std::set<Trace> sym_am_behaviors(const CombinedDescriptor& sem, const Program& p, const Policy& pol,
                                 const AmParams& params, Width w, unsigned bits) {
  ExhaustiveSolver solver(bits, w);
  std::set<Trace> out;
  for (const auto& leaf : combined_sym_run(sem, p, make_initial_sym_config(p, pol, w), params, solver)) {
    auto c = concretize(leaf.trace, solver);
    out.insert(c.begin(), c.end());
  }
  return out;
}

std::vector<Inputs> leaf_inputs(const CombinedDescriptor& sem, const Program& p, const Policy& pol,
                                const AmParams& params, Width w, Value domain, std::size_t limit) {
  std::vector<Inputs> out;
  enumerate_inputs(
      domain,
      [&](const Inputs& in, InputRecorder* rec) {
        if (out.size() >= limit) return 0;  // stop branching once enough leaves are in
        combined_run(sem, p, make_initial_configuration(p, pol, w, in, rec), params);
        return 0;
      },
      [&](const Inputs& in, int) {
        if (out.size() < limit) out.push_back(in);
      });
  return out;
}

namespace {

std::vector<std::string> split(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  for (;;) {
    auto at = s.find(sep);
    out.emplace_back(s.substr(0, at));
    if (at == std::string_view::npos) return out;
    s.remove_prefix(at + sep.size());
  }
}

std::string trim(std::string_view s) {
  const char* ws = " \t\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(ws) - b + 1));
}

bool glob(std::string_view pat, std::string_view text) {
  if (pat.empty()) return text.empty();
  if (pat[0] == '*') {
    for (std::size_t i = 0; i <= text.size(); ++i)
      if (glob(pat.substr(1), text.substr(i))) return true;
    return false;
  }
  return !text.empty() && pat[0] == text[0] && glob(pat.substr(1), text.substr(1));
}

}  // namespace

bool matches_skeleton(const Trace& t, std::string_view pattern, std::string* why) {
  std::string pat = trim(pattern);
  bool anchor_front = false, anchor_back = false;
  if (!pat.empty() && pat.front() == '^') {
    anchor_front = true;
    pat = trim(pat.substr(1));
  }
  if (!pat.empty() && pat.back() == '$') {
    anchor_back = true;
    pat = trim(pat.substr(0, pat.size() - 1));
  }
  std::vector<std::string> shown;
  for (const auto& o : t) shown.push_back(to_string(o));

  auto segments = split(pat, "···");
  std::size_t pos = 0;
  for (std::size_t si = 0; si < segments.size(); ++si) {
    std::vector<std::string> seg;
    for (auto& tok : split(segments[si], "·"))
      if (auto s = trim(tok); !s.empty()) seg.push_back(s);
    if (seg.empty()) continue;
    const bool last = si + 1 == segments.size();
    auto fits = [&](std::size_t at) {
      if (at + seg.size() > shown.size()) return false;
      for (std::size_t k = 0; k < seg.size(); ++k)
        if (!glob(seg[k], shown[at + k])) return false;
      return true;
    };
    std::optional<std::size_t> found;
    if (si == 0 && anchor_front) {
      if (fits(0)) found = 0;
    } else if (last && anchor_back) {
      if (shown.size() >= seg.size() && shown.size() - seg.size() >= pos && fits(shown.size() - seg.size()))
        found = shown.size() - seg.size();
    } else {
      for (std::size_t at = pos; at + seg.size() <= shown.size() && !found; ++at)
        if (fits(at)) found = at;
    }
    if (!found) {
      if (why) *why = "segment " + std::to_string(si + 1) + " '" + trim(segments[si]) + "' not found in " + to_string(t);
      return false;
    }
    pos = *found + seg.size();
  }
  return true;
}

Program fence_everything(const Program& p) {
  auto moved = [](Addr a) { return 2 * a; };
  Program out;
  for (const auto& [a, ins] : p.code) {
    Instruction copy = ins;
    if (auto* b = std::get_if<instr::Beqz>(&copy)) b->target = moved(b->target);
    if (auto* j = std::get_if<instr::Jmp>(&copy)) {
      if (const auto* lit = std::get_if<Expr::Lit>(&j->target->node())) j->target = Expr::lit(moved(lit->value));
    }
    out.code[moved(a)] = instr::Spbarr{};
    out.code[moved(a) + 1] = std::move(copy);
  }
  for (const auto& [name, a] : p.functions) out.functions[name] = moved(a);
  return out;
}

}  // namespace specomp::testing
