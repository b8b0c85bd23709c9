#include "specomp/lang/config.hpp"

#include <set>

namespace specomp {

Value InitialState::read(const Location& loc) const {
  if (loc.is_reg()) {
    if (auto it = registers.find(loc.reg); it != registers.end()) return it->second;
  } else {
    if (auto it = memory.find(loc.addr); it != memory.end()) return it->second;
  }
  if (recorder) recorder->miss(loc);
  return 0;
}

Configuration::Configuration(std::shared_ptr<const InitialState> init, Width width)
    : init_(std::move(init)), width_(width) {
  regs_[std::string(kPcReg)] = init_->read(Location::of_reg(std::string(kPcReg)));
  regs_[std::string(kSpReg)] = init_->read(Location::of_reg(std::string(kSpReg)));
}

Value Configuration::reg(const std::string& name) const {
  if (auto it = regs_.find(name); it != regs_.end()) return it->second;
  return width_.wrap(init_->read(Location::of_reg(name)));
}

Value Configuration::mem(Addr a) const {
  if (auto it = mem_.find(a); it != mem_.end()) return it->second;
  return width_.wrap(init_->read(Location::of_mem(a)));
}

Configuration& Configuration::set_reg(const std::string& name, Value v) {
  regs_[name] = width_.wrap(v);
  return *this;
}

Configuration& Configuration::set_mem(Addr a, Value v) {
  mem_[width_.wrap(a)] = width_.wrap(v);
  return *this;
}

Value Configuration::eval(const Expr& e) const {
  return eval_expr(
      e, [this](const std::string& name) -> std::optional<Value> { return reg(name); }, width_);
}

bool operator==(const Configuration& a, const Configuration& b) {
  if (a.width_ != b.width_) return false;
  if (a.init_ == b.init_) return a.regs_ == b.regs_ && a.mem_ == b.mem_;
  // Different initial states: compare every cell either side knows about.
  std::set<std::string> regs;
  std::set<Addr> mem;
  for (const auto* c : {&a, &b}) {
    for (const auto& [k, v] : c->regs_) regs.insert(k);
    for (const auto& [k, v] : c->mem_) mem.insert(k);
    for (const auto& [k, v] : c->init_->registers) regs.insert(k);
    for (const auto& [k, v] : c->init_->memory) mem.insert(k);
  }
  for (const auto& r : regs)
    if (a.reg(r) != b.reg(r)) return false;
  for (auto m : mem)
    if (a.mem(m) != b.mem(m)) return false;
  return true;
}

Value default_stack_pointer(Width w) {
  if (w.bits >= 16) return 0x1000;
  return Value{1} << (w.bits - 1);
}

Configuration make_initial_configuration(const Program& p, const Policy& policy, Width w,
                                         const std::map<Location, Value>& inputs,
                                         InputRecorder* recorder) {
  auto init = std::make_shared<InitialState>();
  init->recorder = recorder;
  for (const auto& [loc, v] : inputs) {
    if (loc.is_reg()) {
      init->registers[loc.reg] = w.wrap(v);
    } else {
      init->memory[loc.addr] = w.wrap(v);
    }
  }
  for (const auto& [name, v] : policy.init_registers) init->registers[name] = w.wrap(v);
  for (const auto& [a, v] : policy.init_memory) init->memory[a] = w.wrap(v);
  init->registers[std::string(kPcReg)] = p.entry();
  if (!policy.init_registers.count(std::string(kSpReg)))
    init->registers[std::string(kSpReg)] = default_stack_pointer(w);
  return Configuration(std::move(init), w);
}

bool low_equivalent(const Configuration& a, const Configuration& b, const Policy& policy) {
  std::set<std::string> regs{std::string(kPcReg), std::string(kSpReg)};
  regs.insert(policy.public_registers.begin(), policy.public_registers.end());
  for (const auto& r : regs)
    if (a.reg(r) != b.reg(r)) return false;

  // Cells nobody set read as 0 on both sides, so only known cells can differ.
  std::set<Addr> cells;
  for (const auto* c : {&a, &b}) {
    for (const auto& [k, v] : c->written_mem()) cells.insert(k);
    for (const auto& [k, v] : c->initial()->memory) cells.insert(k);
  }
  for (auto cell : cells) {
    if (!policy.is_public(Location::of_mem(cell))) continue;
    if (a.mem(cell) != b.mem(cell)) return false;
  }
  return true;
}

}  // namespace specomp
