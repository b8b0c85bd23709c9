#include "specomp/nonspec/sym_step.hpp"

#include <functional>

namespace specomp {

bool same(const SymObservation& a, const SymObservation& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ObsKind::call: return a.fn == b.fn;
    case ObsKind::start:
    case ObsKind::rollback: return a.src == b.src && a.id == b.id;
    default: return same(a.value, b.value);
  }
}

bool same(const SymTrace& a, const SymTrace& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

std::string to_string(const SymObservation& o) {
  std::string k(to_string(o.kind));
  switch (o.kind) {
    case ObsKind::call: return k + "(" + o.fn + ")";
    case ObsKind::start:
    case ObsKind::rollback:
      return k + "(" + std::string(to_string(o.src)) + "," + std::to_string(o.id) + ")";
    default: return k + "(" + to_string(o.value) + ")";
  }
}

std::string to_string(const SymTrace& t) {
  if (t.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " · ";
    out += to_string(t[i]);
  }
  return out;
}

SymExpr SymInitial::read(const Location& loc) const {
  if (loc.is_reg()) {
    if (auto it = registers.find(loc.reg); it != registers.end()) return SymNode::lit(it->second);
  } else {
    if (auto it = memory.find(loc.addr); it != memory.end()) return SymNode::lit(it->second);
  }
  return SymNode::sym(Symbol{loc, policy.is_public(loc) ? 0u : copy});
}

SymConfig::SymConfig(std::shared_ptr<const SymInitial> init, Value pc, Width width)
    : init_(std::move(init)), pc_(width.wrap(pc)), width_(width) {}

SymExpr SymConfig::reg(const std::string& name) const {
  if (auto it = regs_.find(name); it != regs_.end()) return it->second;
  return init_->read(Location::of_reg(name));
}

SymExpr SymConfig::mem(Addr a) const {
  if (auto it = mem_.find(a); it != mem_.end()) return it->second;
  return init_->read(Location::of_mem(a));
}

SymConfig& SymConfig::set_reg(const std::string& name, SymExpr v) {
  regs_[name] = std::move(v);
  return *this;
}

SymConfig& SymConfig::set_mem(Addr a, SymExpr v) {
  mem_[width_.wrap(a)] = std::move(v);
  return *this;
}

SymExpr SymConfig::eval(const Expr& e) const {
  return std::visit(
      [&](const auto& n) -> SymExpr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Lit>) {
          return SymNode::lit(width_.wrap(n.value));
        } else if constexpr (std::is_same_v<N, Expr::Reg>) {
          return reg(n.name);
        } else if constexpr (std::is_same_v<N, Expr::Unary>) {
          return SymNode::un(n.op, eval(*n.arg), width_);
        } else {
          return SymNode::bin(n.op, eval(*n.lhs), eval(*n.rhs), width_);
        }
      },
      e.node());
}

SymConfig make_initial_sym_config(const Program& p, const Policy& policy, Width w, unsigned copy) {
  auto init = std::make_shared<SymInitial>();
  init->policy = policy;
  init->copy = copy;
  for (const auto& [name, v] : policy.init_registers) init->registers[name] = w.wrap(v);
  for (const auto& [a, v] : policy.init_memory) init->memory[a] = w.wrap(v);
  if (!policy.init_registers.count(std::string(kSpReg)))
    init->registers[std::string(kSpReg)] = default_stack_pointer(w);
  return SymConfig(std::move(init), p.entry(), w);
}

namespace {

struct Case {
  Value value;
  PathCondition path;
  SymTrace obs;
};

/// Splits `e` on its feasible values. A single feasible value is implied by
/// the path and adds no constraint.
std::vector<Case> split(const SymExpr& e, const PathCondition& path, const Solver& solver, Width w) {
  if (e->is_lit()) return {{e->value(), path, {}}};
  auto values = solver.feasible_values(path, e);
  if (values.size() == 1) return {{values[0], path, {}}};
  std::vector<Case> out;
  for (Value v : values) {
    auto c = SymNode::bin(BinOp::eq, e, SymNode::lit(v), w);
    out.push_back({v, path.with(c), {SymObservation::pathcond(c)}});
  }
  return out;
}

}  // namespace

SymStepResult sym_ns_step(const Program& p, const SymConfig& sigma, const PathCondition& path,
                          const Solver& solver) {
  SymStepResult r;
  const Value pc = sigma.pc();
  const Instruction* ins = p.at(pc);
  if (!ins) {
    r.status = StepStatus::terminated;
    return r;
  }
  const Width w = sigma.width();
  SymConfig base = sigma;
  base.set_pc(pc + 1);
  auto emit = [&](SymConfig c, const Case& cs, std::optional<SymObservation> o) {
    SymTrace obs = cs.obs;
    if (o) obs.push_back(std::move(*o));
    r.next.push_back({std::move(c), cs.path, std::move(obs)});
  };
  const Case plain{0, path, {}};

  switch (kind_of(*ins)) {
    case InstrKind::skip:
    case InstrKind::spbarr: emit(base, plain, std::nullopt); break;
    case InstrKind::assign: {
      const auto& a = std::get<instr::Assign>(*ins);
      emit(base.set_reg(a.reg, sigma.eval(*a.expr)), plain, std::nullopt);
      break;
    }
    case InstrKind::cmov: {
      const auto& c = std::get<instr::Cmov>(*ins);
      emit(base.set_reg(c.reg, SymNode::ite(sigma.eval(*c.cond), sigma.eval(*c.value), sigma.reg(c.reg))),
           plain, std::nullopt);
      break;
    }
    case InstrKind::load: {
      const auto& l = std::get<instr::Load>(*ins);
      for (const auto& cs : split(sigma.eval(*l.addr), path, solver, w)) {
        SymConfig n = base;
        n.set_reg(l.reg, sigma.mem(cs.value));
        emit(std::move(n), cs, SymObservation::load(SymNode::lit(cs.value)));
      }
      break;
    }
    case InstrKind::store: {
      const auto& s = std::get<instr::Store>(*ins);
      for (const auto& cs : split(sigma.eval(*s.addr), path, solver, w)) {
        SymConfig n = base;
        n.set_mem(cs.value, sigma.reg(s.reg));
        emit(std::move(n), cs, SymObservation::store(SymNode::lit(cs.value)));
      }
      break;
    }
    case InstrKind::beqz: {
      const auto& b = std::get<instr::Beqz>(*ins);
      auto g = sigma.reg(b.reg);
      const Value next = w.wrap(pc + 1);
      if (g->is_lit()) {
        Value t = g->value() == 0 ? b.target : next;
        emit(SymConfig(base).set_pc(t), plain, SymObservation::pc(SymNode::lit(t)));
        break;
      }
      auto zero = SymNode::bin(BinOp::eq, g, SymNode::lit(0), w);
      auto nonzero = SymNode::un(UnOp::lnot, zero, w);
      bool can_zero = solver.satisfiable(path, zero);
      bool can_nonzero = solver.satisfiable(path, nonzero);
      if (can_zero && can_nonzero) {
        emit(SymConfig(base).set_pc(b.target), {0, path.with(zero), {SymObservation::pathcond(zero)}},
             SymObservation::pc(SymNode::lit(b.target)));
        emit(SymConfig(base).set_pc(next), {0, path.with(nonzero), {SymObservation::pathcond(nonzero)}},
             SymObservation::pc(SymNode::lit(next)));
      } else {
        Value t = can_zero ? b.target : next;
        emit(SymConfig(base).set_pc(t), plain, SymObservation::pc(SymNode::lit(t)));
      }
      break;
    }
    case InstrKind::jmp: {
      const auto& j = std::get<instr::Jmp>(*ins);
      for (const auto& cs : split(sigma.eval(*j.target), path, solver, w)) {
        emit(SymConfig(base).set_pc(cs.value), cs, SymObservation::pc(SymNode::lit(cs.value)));
      }
      break;
    }
    case InstrKind::call: {
      const auto& c = std::get<instr::Call>(*ins);
      auto f = p.functions.find(c.function);
      if (f == p.functions.end()) {
        r.status = StepStatus::stuck;
        r.stuck_reason = "call to unknown function '" + c.function + "'";
        return r;
      }
      auto sp = SymNode::bin(BinOp::sub, sigma.reg(std::string(kSpReg)), SymNode::lit(kStackSlot), w);
      for (const auto& cs : split(sp, path, solver, w)) {
        SymConfig n = base;
        n.set_reg(std::string(kSpReg), SymNode::lit(cs.value));
        n.set_mem(cs.value, SymNode::lit(w.wrap(pc + 1)));
        n.set_pc(f->second);
        emit(std::move(n), cs, SymObservation::call(c.function));
      }
      break;
    }
    case InstrKind::ret: {
      for (const auto& sp_case : split(sigma.reg(std::string(kSpReg)), path, solver, w)) {
        for (const auto& cs : split(sigma.mem(sp_case.value), sp_case.path, solver, w)) {
          SymConfig n = base;
          n.set_reg(std::string(kSpReg), SymNode::lit(w.wrap(sp_case.value + kStackSlot)));
          n.set_pc(cs.value);
          Case both{cs.value, cs.path, sp_case.obs};
          both.obs.insert(both.obs.end(), cs.obs.begin(), cs.obs.end());
          emit(std::move(n), both, SymObservation::ret(SymNode::lit(cs.value)));
        }
      }
      break;
    }
  }
  return r;
}

std::vector<SymLeaf> sym_ns_behavior(const Program& p, const SymConfig& sigma0, const Solver& solver,
                                     std::uint64_t fuel) {
  struct Item {
    SymConfig config;
    PathCondition path;
    SymTrace trace;
    std::uint64_t steps;
  };
  std::vector<SymLeaf> leaves;
  std::vector<Item> work{{sigma0, {}, {}, 0}};
  while (!work.empty()) {
    Item it = std::move(work.back());
    work.pop_back();
    if (!p.at(it.config.pc())) {
      leaves.push_back({std::move(it.trace), it.path, RunStatus::terminated});
      continue;
    }
    if (it.steps == fuel) {
      leaves.push_back({std::move(it.trace), it.path, RunStatus::fuel_exhausted});
      continue;
    }
    auto r = sym_ns_step(p, it.config, it.path, solver);
    if (r.status == StepStatus::stuck) {
      leaves.push_back({std::move(it.trace), it.path, RunStatus::stuck});
      continue;
    }
    // Reverse so the first successor is explored first.
    for (auto s = r.next.rbegin(); s != r.next.rend(); ++s) {
      SymTrace t = it.trace;
      t.insert(t.end(), s->obs.begin(), s->obs.end());
      work.push_back({std::move(s->config), std::move(s->path), std::move(t), it.steps + 1});
    }
  }
  return leaves;
}

Trace instantiate(const SymTrace& t, const Assignment& a, Width w) {
  Trace out;
  for (const auto& o : t) {
    if (o.kind == ObsKind::pathcond) continue;
    Observation c;
    c.kind = o.kind;
    c.fn = o.fn;
    c.src = o.src;
    c.id = o.id;
    if (o.value) c.value = eval(o.value, a, w);
    out.push_back(std::move(c));
  }
  return out;
}

std::set<Trace> concretize(const SymTrace& t, const Solver& solver) {
  std::vector<SymExpr> constraints;
  std::set<Symbol> syms;
  for (const auto& o : t) {
    if (!o.value) continue;
    syms.insert(o.value->symbols().begin(), o.value->symbols().end());
    if (o.kind == ObsKind::pathcond) constraints.push_back(o.value);
  }
  std::set<Trace> out;
  solver.enumerate(constraints, {syms.begin(), syms.end()}, [&](const Assignment& a) {
    out.insert(instantiate(t, a, solver.width()));
    return true;
  });
  return out;
}

}  // namespace specomp
