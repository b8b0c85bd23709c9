#include "specomp/nonspec/step.hpp"

namespace specomp {

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::terminated: return "terminated";
    case RunStatus::stuck: return "stuck";
    case RunStatus::fuel_exhausted: return "fuel-exhausted";
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

StepResult ns_step(const Program& p, const Configuration& sigma) {
  StepResult r;
  const Value pc = sigma.pc();
  const Instruction* ins = p.at(pc);
  if (!ins) {
    r.status = StepStatus::terminated;
    r.next = sigma;
    return r;
  }
  Configuration next = sigma;
  next.set_pc(pc + 1);
  std::visit(overloaded{
                 [](const instr::Skip&) {},
                 [](const instr::Spbarr&) {},
                 [&](const instr::Assign& a) { next.set_reg(a.reg, sigma.eval(*a.expr)); },
                 [&](const instr::Cmov& c) {
                   if (sigma.eval(*c.cond) != 0) next.set_reg(c.reg, sigma.eval(*c.value));
                 },
                 [&](const instr::Load& l) {
                   Addr a = sigma.eval(*l.addr);
                   next.set_reg(l.reg, sigma.mem(a));
                   r.obs = Observation::load(a);
                 },
                 [&](const instr::Store& s) {
                   Addr a = sigma.eval(*s.addr);
                   next.set_mem(a, sigma.reg(s.reg));
                   r.obs = Observation::store(a);
                 },
                 [&](const instr::Beqz& b) {
                   Addr target = sigma.reg(b.reg) == 0 ? b.target : sigma.width().wrap(pc + 1);
                   next.set_pc(target);
                   r.obs = Observation::pc(target);
                 },
                 [&](const instr::Jmp& j) {
                   Addr target = sigma.eval(*j.target);
                   next.set_pc(target);
                   r.obs = Observation::pc(target);
                 },
                 [&](const instr::Call& c) {
                   auto f = p.functions.find(c.function);
                   if (f == p.functions.end()) {
                     r.status = StepStatus::stuck;
                     r.stuck_reason = "call to unknown function '" + c.function + "'";
                     return;
                   }
                   Value sp = sigma.width().wrap(sigma.sp() - kStackSlot);
                   next.set_reg(std::string(kSpReg), sp);
                   next.set_mem(sp, sigma.width().wrap(pc + 1));
                   next.set_pc(f->second);
                   r.obs = Observation::call(c.function);
                 },
                 [&](const instr::Ret&) {
                   Value target = sigma.mem(sigma.sp());
                   next.set_reg(std::string(kSpReg), sigma.sp() + kStackSlot);
                   next.set_pc(target);
                   r.obs = Observation::ret(target);
                 },
             },
             *ins);
  if (r.status == StepStatus::ok) r.next = std::move(next);
  else r.next = sigma;
  return r;
}

Behavior ns_behavior(const Program& p, const Configuration& sigma0, std::uint64_t fuel) {
  Behavior b;
  Configuration cur = sigma0;
  for (;;) {
    if (!p.at(cur.pc())) {
      b.status = RunStatus::terminated;
      break;
    }
    if (b.steps == fuel) {
      b.status = RunStatus::fuel_exhausted;
      break;
    }
    auto r = ns_step(p, cur);
    ++b.steps;
    if (r.status == StepStatus::stuck) {
      b.status = RunStatus::stuck;
      break;
    }
    if (r.obs) b.trace.push_back(*r.obs);
    cur = std::move(r.next);
  }
  b.final_state = std::move(cur);
  return b;
}

}  // namespace specomp
