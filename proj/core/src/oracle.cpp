#include "specomp/specsem/oracle.hpp"

#include <algorithm>

namespace specomp {

namespace {

struct OFrame {
  std::uint64_t ctr = 0;
  Configuration cfg;
  std::optional<std::uint64_t> window;
  std::optional<std::vector<Addr>> rsb;
  std::optional<Source> src;
  History history;
};

std::optional<Source> pick(const Participants& parts, InstrKind k) {
  if (auto o = owner_of(k); o && parts.eligible(*o, k)) return o;
  for (Source x : kAllSources)
    if (parts.eligible(x, k)) return x;
  return std::nullopt;
}

}  // namespace

AmResult oracle_run(const Program& p, const Configuration& sigma0, const Participants& parts,
                    const Oracle& oracle, const OracleParams& params) {
  AmResult r;
  std::vector<OFrame> stack(1);
  stack[0].cfg = sigma0;
  stack[0].history.limit = params.history;
  if (parts.has(Source::R)) stack[0].rsb.emplace();
  std::uint64_t steps = 0;

  auto rollback = [&] {
    OFrame top = std::move(stack.back());
    stack.pop_back();
    r.trace.push_back(Observation::rollback(*top.src, stack.back().ctr));
    stack.back().ctr = top.ctr;
  };

  for (;;) {
    OFrame& top = stack.back();
    const std::size_t h = stack.size();
    if (h > 1 && *top.window == 0) {
      rollback();
      continue;
    }
    const Addr pc = top.cfg.pc();
    const Instruction* ins = p.at(pc);
    if (!ins) {
      if (h > 1) {
        rollback();
        continue;
      }
      r.status = RunStatus::terminated;
      break;
    }
    if (steps == params.fuel) {
      r.status = RunStatus::fuel_exhausted;
      break;
    }
    const InstrKind k = kind_of(*ins);
    const auto x = pick(parts, k);
    auto ns = ns_step(p, top.cfg);
    if (!x || ns.status == StepStatus::stuck) {
      if (h > 1) {
        rollback();
        continue;
      }
      r.status = RunStatus::stuck;
      break;
    }
    ++steps;
    if (ns.obs) r.trace.push_back(*ns.obs);
    const auto dec = top.window ? std::optional<std::uint64_t>(*top.window - 1) : std::nullopt;
    auto clamp = [&](std::uint64_t w) {
      w = std::min(w, params.window);
      return dec ? std::min(w, *dec) : w;
    };

    OFrame lower = top;
    lower.cfg = std::move(ns.next);
    lower.window = dec;
    std::optional<OFrame> pushed;
    auto speculate = [&](Source src, Configuration cfg, std::uint64_t window) {
      OFrame f;
      f.ctr = top.ctr + 1;
      f.cfg = std::move(cfg);
      f.window = window;
      f.rsb = lower.rsb;
      f.src = src;
      f.history = lower.history;
      r.trace.push_back(Observation::start(src, top.ctr));
      pushed = std::move(f);
    };

    if (*x == Source::B && k == InstrKind::beqz) {
      const Addr label = std::get<instr::Beqz>(*ins).target;
      const Addr fall = top.cfg.width().wrap(pc + 1);
      const Addr actual = lower.cfg.pc();
      const bool actual_taken = actual == label && label != fall;
      Prediction pr = oracle.branch(BranchQuery{pc, &top.history, actual_taken});
      lower.history.push(pc, actual_taken);
      const Addr predicted = pr.choice ? label : fall;
      if (predicted != actual) {
        speculate(Source::B, Configuration(top.cfg).set_pc(predicted), clamp(pr.window));
        if (!pushed->history.entries.empty()) pushed->history.entries.back().second = pr.choice;
        r.trace.push_back(Observation::pc(predicted));
      }
    } else if (*x == Source::S && k == InstrKind::store) {
      Prediction pr = oracle.store(pc, top.history);
      lower.history.push(pc, pr.choice);
      if (pr.choice) {
        speculate(Source::S, Configuration(top.cfg).set_pc(top.cfg.width().wrap(pc + 1)), clamp(pr.window));
        r.trace.push_back(Observation::skip(pc));
      }
    } else if (*x == Source::R && k == InstrKind::call) {
      if (lower.rsb && lower.rsb->size() < params.rsb_size) lower.rsb->push_back(top.cfg.width().wrap(pc + 1));
    } else if (*x == Source::R && k == InstrKind::ret && lower.rsb && !lower.rsb->empty()) {
      const Addr predicted = lower.rsb->back();
      lower.rsb->pop_back();
      if (predicted != lower.cfg.pc()) {
        speculate(Source::R, Configuration(lower.cfg).set_pc(predicted), clamp(oracle.ret(top.history)));
        r.trace.push_back(Observation::ret(predicted));
      }
    } else if (k == InstrKind::spbarr && lower.window) {
      lower.window = 0;
    }

    stack.back() = std::move(lower);
    if (pushed) stack.push_back(std::move(*pushed));
  }
  r.steps = steps;
  return r;
}

Oracle never_mispredict_oracle() {
  Oracle o;
  o.name = "never-mispredict";
  o.branch = [](const BranchQuery& q) { return Prediction{q.actual_taken, 0}; };
  o.store = [](Addr, const History&) { return Prediction{false, 0}; };
  o.ret = [](const History&) { return std::uint64_t{0}; };
  return o;
}

namespace {

enum class BranchChoice { correct, taken, not_taken };

std::vector<Addr> sites(const Program& p, InstrKind k) {
  std::vector<Addr> out;
  for (const auto& [a, ins] : p.code)
    if (kind_of(ins) == k) out.push_back(a);
  return out;
}

template <class T>
T choice_at(const std::vector<Addr>& s, const std::vector<T>& per_site, Addr pc, T fallback) {
  for (std::size_t i = 0; i < s.size() && i < per_site.size(); ++i)
    if (s[i] == pc) return per_site[i];
  return per_site.empty() ? fallback : per_site.back();
}

// All vectors of length n over `values`.
template <class T>
std::vector<std::vector<T>> tuples(const std::vector<T>& values, std::size_t n) {
  std::vector<std::vector<T>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<T>> next;
    for (const auto& t : out)
      for (const auto& v : values) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Oracle> oracle_family(const Program& p, const Participants& parts,
                                  const std::vector<std::uint64_t>& windows) {
  const auto bsites = sites(p, InstrKind::beqz);
  const auto ssites = sites(p, InstrKind::store);
  auto btuples = tuples<BranchChoice>({BranchChoice::correct, BranchChoice::taken, BranchChoice::not_taken},
                                      parts.has(Source::B) ? std::min<std::size_t>(bsites.size(), 2) : 0);
  auto stuples = tuples<bool>({false, true}, parts.has(Source::S) ? std::min<std::size_t>(ssites.size(), 2) : 0);

  std::vector<Oracle> family;
  for (std::uint64_t w : windows) {
    for (const auto& bt : btuples) {
      for (const auto& st : stuples) {
        Oracle o;
        o.name = "w=" + std::to_string(w);
        for (auto c : bt) o.name += c == BranchChoice::correct ? " b:ok" : c == BranchChoice::taken ? " b:t" : " b:nt";
        for (bool c : st) o.name += c ? " s:y" : " s:n";
        o.branch = [bsites, bt, w](const BranchQuery& q) {
          switch (choice_at(bsites, bt, q.pc, BranchChoice::correct)) {
            case BranchChoice::taken: return Prediction{true, w};
            case BranchChoice::not_taken: return Prediction{false, w};
            case BranchChoice::correct: break;
          }
          return Prediction{q.actual_taken, w};
        };
        o.store = [ssites, st, w](Addr pc, const History&) { return Prediction{choice_at(ssites, st, pc, false), w}; };
        o.ret = [w](const History&) { return w; };
        family.push_back(std::move(o));
      }
    }
    if (parts.has(Source::B) && !bsites.empty()) {
      // One-bit predictor: repeat the last outcome seen at this pc, else taken.
      Oracle o = never_mispredict_oracle();
      o.name = "w=" + std::to_string(w) + " b:last";
      o.branch = [w](const BranchQuery& q) {
        for (auto it = q.history->entries.rbegin(); it != q.history->entries.rend(); ++it)
          if (it->first == q.pc) return Prediction{it->second, w};
        return Prediction{true, w};
      };
      family.push_back(std::move(o));
    }
  }
  return family;
}

}  // namespace specomp
