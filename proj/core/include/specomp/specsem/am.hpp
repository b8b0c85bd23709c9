#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specomp/lang/ast.hpp"
#include "specomp/specsem/domain.hpp"

namespace specomp {

inline constexpr std::array<Source, 3> kAllSources{Source::B, Source::S, Source::R};

/// Instruction kinds a source speculates on.
constexpr KindSet relevant_kinds(Source s) {
  switch (s) {
    case Source::B: return KindSet{InstrKind::beqz};
    case Source::S: return KindSet{InstrKind::store};
    case Source::R: return KindSet{InstrKind::call, InstrKind::ret};
  }
  return {};
}

/// The source whose rules speculate on `k`, if any.
std::optional<Source> owner_of(InstrKind k);

/// Which sources take part in a semantics, and the instruction kinds each of
/// them must leave to the others (Z).
struct Participants {
  std::array<bool, 3> active{};
  std::array<KindSet, 3> z{};

  bool has(Source s) const { return active[std::size_t(s)]; }
  KindSet z_of(Source s) const { return z[std::size_t(s)]; }
  bool eligible(Source s, InstrKind k) const { return has(s) && !z_of(s).contains(k); }

  static Participants single(Source s);
};

struct AmParams {
  std::uint64_t window = 12;
  std::size_t rsb_size = 8;
  std::uint64_t fuel = 100000;
};

/// One speculative instance. The root frame has no window (⊥) and no source.
template <class D>
struct Frame {
  std::uint64_t ctr = 0;
  typename D::Config cfg;
  std::optional<std::uint64_t> window;
  std::optional<std::vector<Addr>> rsb;
  std::optional<Source> src;
};

template <class D>
struct AmState {
  std::vector<Frame<D>> stack;
  typename D::Path path;
  std::uint64_t steps = 0;
};

enum class AmEventKind : std::uint8_t { ns_step, push, rollback };

/// Reported by the engine after each transition, for invariant checks.
/// push: `cfg` is the frame left below the new transaction. rollback: `cfg`
/// is the resumed frame. ns_step: `cfg` is the new top.
template <class D>
struct AmEvent {
  AmEventKind kind;
  std::optional<Source> src;
  std::uint64_t id = 0;
  std::size_t depth = 0;
  const Frame<D>* top = nullptr;
  const typename D::Config* cfg = nullptr;
  InstrKind instr = InstrKind::skip;
};

template <class D>
using AmObserver = std::function<void(const AmEvent<D>&)>;

/// Result of one step attempt by a single source.
template <class D>
struct AmTransition {
  AmState<D> state;
  std::vector<BasicObservation<typename D::Val>> obs;
};

enum class AmStepStatus : std::uint8_t { ok, terminated, stuck, not_applicable };

template <class D>
struct AmStepOutcome {
  AmStepStatus status = AmStepStatus::ok;
  std::vector<AmTransition<D>> next;
};

template <class D>
class AmEngine {
 public:
  using Config = typename D::Config;
  using Obs = BasicObservation<typename D::Val>;

  AmEngine(const Program& p, Participants parts, AmParams params, D domain = {})
      : p_(p), parts_(parts), params_(params), dom_(std::move(domain)) {}

  AmState<D> initial(Config cfg) const {
    AmState<D> s;
    Frame<D> root;
    root.cfg = std::move(cfg);
    if (parts_.has(Source::R)) root.rsb.emplace();
    s.stack.push_back(std::move(root));
    return s;
  }

  /// The source that executes the top instruction in the combined semantics:
  /// its owner when eligible, else the first eligible participant.
  std::optional<Source> delegate(const AmState<D>& s) const {
    const Instruction* ins = p_.at(D::pc(s.stack.back().cfg));
    if (!ins) return first_active();
    InstrKind k = kind_of(*ins);
    if (auto o = owner_of(k); o && parts_.eligible(*o, k)) return o;
    for (Source x : kAllSources)
      if (parts_.eligible(x, k)) return x;
    return std::nullopt;
  }

  /// One step of source `x`'s rules at the top of the stack.
  AmStepOutcome<D> step_as(const AmState<D>& s, Source x, const AmObserver<D>* obs = nullptr) const {
    AmStepOutcome<D> out;
    const Frame<D>& top = s.stack.back();
    const std::size_t h = s.stack.size();
    if (h > 1 && top.window && *top.window == 0) return rollback(s, obs);
    const Value pc = D::pc(top.cfg);
    const Instruction* ins = p_.at(pc);
    if (!ins) {
      if (h > 1) return rollback(s, obs);
      out.status = AmStepStatus::terminated;
      return out;
    }
    const InstrKind k = kind_of(*ins);
    if (!parts_.eligible(x, k)) {
      out.status = AmStepStatus::not_applicable;
      return out;
    }
    auto ns = dom_.step(p_, top.cfg, s.path);
    if (ns.status == StepStatus::stuck) {
      if (h > 1) return rollback(s, obs);
      out.status = AmStepStatus::stuck;
      return out;
    }
    const std::optional<std::uint64_t> dec =
        top.window ? std::optional<std::uint64_t>(*top.window - 1) : std::nullopt;
    const std::uint64_t pushed_window = dec ? std::min(params_.window, *dec) : params_.window;

    for (auto& succ : ns.next) {
      AmTransition<D> t;
      t.state.path = succ.path;
      t.state.steps = s.steps + 1;
      t.state.stack.assign(s.stack.begin(), s.stack.end() - 1);
      t.obs = succ.obs;
      Frame<D> lower = top;
      lower.cfg = succ.cfg;
      lower.window = dec;
      std::optional<Frame<D>> pushed;
      auto speculate = [&](Source src, Config cfg, std::optional<std::vector<Addr>> rsb) {
        Frame<D> f;
        f.ctr = top.ctr + 1;
        f.cfg = std::move(cfg);
        f.window = pushed_window;
        f.rsb = std::move(rsb);
        f.src = src;
        pushed = std::move(f);
        t.obs.push_back(Obs::start(src, top.ctr));
      };

      if (x == Source::B && k == InstrKind::beqz) {
        const Addr label = std::get<instr::Beqz>(*ins).target;
        const Value correct = D::pc(succ.cfg);
        const Value wrong = correct == label ? top.cfg.width().wrap(pc + 1) : label;
        speculate(Source::B, D::with_pc(top.cfg, wrong), top.rsb);
        t.obs.push_back(Obs::pc(D::lit(wrong)));
      } else if (x == Source::S && k == InstrKind::store) {
        speculate(Source::S, D::with_pc(top.cfg, top.cfg.width().wrap(pc + 1)), top.rsb);
        t.obs.push_back(Obs::skip(D::lit(pc)));
      } else if (x == Source::R && k == InstrKind::call) {
        if (lower.rsb && lower.rsb->size() < params_.rsb_size)
          lower.rsb->push_back(top.cfg.width().wrap(pc + 1));
      } else if (x == Source::R && k == InstrKind::ret && lower.rsb && !lower.rsb->empty()) {
        const Addr predicted = lower.rsb->back();
        lower.rsb->pop_back();
        if (predicted != D::pc(succ.cfg)) {
          speculate(Source::R, D::with_pc(succ.cfg, predicted), lower.rsb);
          t.obs.push_back(Obs::ret(D::lit(predicted)));
        }
      } else if (k == InstrKind::spbarr && lower.window) {
        lower.window = 0;
      }

      t.state.stack.push_back(std::move(lower));
      if (pushed) t.state.stack.push_back(std::move(*pushed));
      if (obs && *obs) {
        const Frame<D>& below = t.state.stack[s.stack.size() - 1];
        (*obs)(AmEvent<D>{AmEventKind::ns_step, below.src, s.stack.size() > 1 ? s.stack[h - 2].ctr : 0,
                          h, &below, &below.cfg, k});
        if (pushed) {
          const Frame<D>& nt = t.state.stack.back();
          (*obs)(AmEvent<D>{AmEventKind::push, nt.src, top.ctr, h + 1, &nt, &below.cfg, k});
        }
      }
      out.next.push_back(std::move(t));
    }
    return out;
  }

  /// One step of the combined semantics.
  AmStepOutcome<D> step(const AmState<D>& s, const AmObserver<D>* obs = nullptr) const {
    auto x = delegate(s);
    if (!x) {
      AmStepOutcome<D> out;
      out.status = AmStepStatus::stuck;
      return out;
    }
    return step_as(s, *x, obs);
  }

  const Program& program() const { return p_; }
  const Participants& participants() const { return parts_; }
  const AmParams& params() const { return params_; }

 private:
  std::optional<Source> first_active() const {
    for (Source x : kAllSources)
      if (parts_.has(x)) return x;
    return std::nullopt;
  }

  AmStepOutcome<D> rollback(const AmState<D>& s, const AmObserver<D>* obs) const {
    AmStepOutcome<D> out;
    AmTransition<D> t;
    t.state = s;
    Frame<D> top = std::move(t.state.stack.back());
    t.state.stack.pop_back();
    Frame<D>& lower = t.state.stack.back();
    t.obs.push_back(Obs::rollback(*top.src, lower.ctr));
    const std::uint64_t id = lower.ctr;
    lower.ctr = top.ctr;
    if (obs && *obs) {
      (*obs)(AmEvent<D>{AmEventKind::rollback, top.src, id, t.state.stack.size(), &lower, &lower.cfg,
                        InstrKind::skip});
    }
    out.next.push_back(std::move(t));
    return out;
  }

  const Program& p_;
  Participants parts_;
  AmParams params_;
  D dom_;
};

struct AmResult {
  Trace trace;
  RunStatus status = RunStatus::terminated;
  std::uint64_t steps = 0;
};

/// Runs the (combined) always-mispredict semantics from a root frame holding
/// σ0. Fuel counts non-speculative steps, speculative ones included.
AmResult am_run(const Program& p, const Configuration& sigma0, const Participants& parts,
                const AmParams& params, const AmObserver<ConcreteDomain>& observer = {});

struct SymAmLeaf {
  SymTrace trace;
  PathCondition path;
  RunStatus status = RunStatus::terminated;
};

/// All symbolic paths of the (combined) always-mispredict semantics.
std::vector<SymAmLeaf> sym_am_run(const Program& p, const SymConfig& sigma0, const Participants& parts,
                                  const AmParams& params, const Solver& solver);

}  // namespace specomp
