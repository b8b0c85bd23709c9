#include "specomp/nonspec/solver.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace specomp {

PathCondition PathCondition::with(SymExpr c) const {
  PathCondition p;
  p.head_ = std::make_shared<const Node>(Node{std::move(c), head_});
  p.size_ = size_ + 1;
  return p;
}

std::vector<SymExpr> PathCondition::constraints() const {
  std::vector<SymExpr> out;
  out.reserve(size_);
  for (const Node* n = head_.get(); n; n = n->next.get()) out.push_back(n->c);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<SymExpr> relevant_constraints(const std::vector<SymExpr>& all, std::vector<Symbol> seed) {
  std::set<Symbol> syms(seed.begin(), seed.end());
  std::vector<bool> taken(all.size(), false);
  std::vector<SymExpr> out;
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (taken[i]) continue;
      const auto& cs = all[i]->symbols();
      bool touches = cs.empty() || std::any_of(cs.begin(), cs.end(), [&](const Symbol& s) {
                       return syms.count(s) > 0;
                     });
      if (!touches) continue;
      taken[i] = true;
      out.push_back(all[i]);
      for (const auto& s : cs) grew |= syms.insert(s).second;
    }
  }
  return out;
}

bool Solver::satisfiable(const std::vector<SymExpr>& constraints) const {
  bool found = false;
  enumerate(constraints, {}, [&](const Assignment&) {
    found = true;
    return false;
  });
  return found;
}

bool Solver::satisfiable(const PathCondition& path, const SymExpr& extra) const {
  if (extra->is_lit()) {
    if (extra->value() == 0) return false;
    // The path itself is kept satisfiable by construction.
    return true;
  }
  auto cs = relevant_constraints(path.constraints(), extra->symbols());
  cs.push_back(extra);
  return satisfiable(cs);
}

std::vector<Value> Solver::feasible_values(const PathCondition& path, const SymExpr& e) const {
  if (e->is_lit()) return {e->value()};
  auto cs = relevant_constraints(path.constraints(), e->symbols());
  std::set<Value> seen;
  enumerate(cs, e->symbols(), [&](const Assignment& a) {
    seen.insert(eval(e, a, width()));
    return true;
  });
  return {seen.begin(), seen.end()};
}

ExhaustiveSolver::ExhaustiveSolver(unsigned domain_bits, Width width) : width_(width) {
  if (domain_bits == 0 || domain_bits > 16) throw std::invalid_argument("domain bits must be in 1..16");
  unsigned bits = std::min(domain_bits, width.bits);
  domain_ = bits >= 64 ? 0 : Value{1} << bits;
}

void ExhaustiveSolver::enumerate(const std::vector<SymExpr>& constraints,
                                 const std::vector<Symbol>& symbols,
                                 const std::function<bool(const Assignment&)>& visit) const {
  std::vector<Symbol> order;
  {
    std::set<Symbol> all(symbols.begin(), symbols.end());
    for (const auto& c : constraints) all.insert(c->symbols().begin(), c->symbols().end());
    order.assign(all.begin(), all.end());
  }
  // Each constraint is checked as soon as its last symbol is bound.
  std::vector<std::vector<const SymExpr*>> ready(order.size() + 1);
  for (const auto& c : constraints) {
    std::size_t last = 0;
    for (const auto& s : c->symbols()) {
      auto idx = std::size_t(std::lower_bound(order.begin(), order.end(), s) - order.begin()) + 1;
      last = std::max(last, idx);
    }
    ready[last].push_back(&c);
  }
  Assignment a;
  auto holds = [&](std::size_t level) {
    for (const auto* c : ready[level])
      if (eval(*c, a, width_) == 0) return false;
    return true;
  };
  if (!holds(0)) return;

  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (stop) return;
    if (i == order.size()) {
      if (!visit(a)) stop = true;
      return;
    }
    for (Value v = 0; v < domain_ && !stop; ++v) {
      a[order[i]] = v;
      if (holds(i + 1)) go(i + 1);
    }
    a.erase(order[i]);
  };
  go(0);
}

}  // namespace specomp
