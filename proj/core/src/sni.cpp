#include "specomp/sni/sni.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace specomp {

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::secure: return "secure";
    case VerdictStatus::insecure: return "insecure";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

std::size_t first_difference(const Trace& a, const Trace& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return i;
  return n;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct Leaf {
  Inputs inputs;
  AmResult result;
  Trace ns;
  std::size_t hash = 0;
};

std::size_t hash_trace(const Trace& t) {
  std::size_t h = t.size();
  for (const auto& o : t) {
    h = h * 1000003u ^ std::size_t(o.kind);
    h = h * 1000003u ^ std::hash<Value>{}(o.value);
    h = h * 1000003u ^ std::hash<std::string>{}(o.fn);
    h = h * 1000003u ^ (std::size_t(o.src) << 8 | o.id);
  }
  return h;
}

bool compatible(const Inputs& a, const Inputs& b, const Policy& policy) {
  for (const auto& [loc, v] : a) {
    if (!policy.is_public(loc)) continue;
    auto it = b.find(loc);
    if (it != b.end() && it->second != v) return false;
  }
  return true;
}

// Public cells one side read and the other did not, copied across so the
// two witness states are low-equivalent as written down.
void share_public(Inputs& into, const Inputs& from, const Policy& policy) {
  for (const auto& [loc, v] : from)
    if (policy.is_public(loc)) into.emplace(loc, v);
}

struct RunCtx {
  const Program& p;
  const Policy& policy;
  const Runner& runner;
  const CheckOptions& opt;

  AmResult run(const Inputs& in, InputRecorder* rec) const {
    return runner(make_initial_configuration(p, policy, opt.width, in, rec));
  }
};

// Expands the input tree breadth-first until there are enough subtrees to
// share out, keeping them in enumeration order.
struct FrontierNode {
  Inputs inputs;
  bool complete = false;
  AmResult result;
};

std::vector<FrontierNode> split_frontier(const RunCtx& ctx, Value domain, std::size_t target,
                                         std::uint64_t& runs) {
  std::vector<FrontierNode> f(1);
  bool expanded = true;
  while (expanded && f.size() < target) {
    expanded = false;
    std::vector<FrontierNode> g;
    for (auto& node : f) {
      if (node.complete) {
        g.push_back(std::move(node));
        continue;
      }
      InputRecorder rec;
      node.result = ctx.run(node.inputs, &rec);
      ++runs;
      if (rec.misses().empty()) {
        node.complete = true;
        g.push_back(std::move(node));
        continue;
      }
      expanded = true;
      for (Value v = 0; v < domain; ++v) {
        FrontierNode child;
        child.inputs = node.inputs;
        child.inputs[rec.misses().front()] = v;
        g.push_back(std::move(child));
      }
    }
    f = std::move(g);
  }
  return f;
}

std::vector<Leaf> collect_leaves(const RunCtx& ctx, Value domain, unsigned threads, CheckStats& stats) {
  std::uint64_t runs = 0;
  auto f = split_frontier(ctx, domain, threads > 1 ? std::size_t(threads) * 8 : 1, runs);
  std::vector<std::vector<Leaf>> parts(f.size());
  std::vector<std::uint64_t> part_runs(f.size(), 0);
  parallel_for(f.size(), threads, [&](std::size_t i) {
    if (f[i].complete) {
      parts[i].push_back(Leaf{f[i].inputs, f[i].result, {}, 0});
      return;
    }
    enumerate_inputs(
        domain,
        [&](const Inputs& in, InputRecorder* rec) {
          ++part_runs[i];
          return ctx.run(in, rec);
        },
        [&](const Inputs& in, AmResult r) { parts[i].push_back(Leaf{in, std::move(r), {}, 0}); },
        f[i].inputs);
  });
  std::vector<Leaf> leaves;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    runs += part_runs[i];
    for (auto& l : parts[i]) leaves.push_back(std::move(l));
  }
  stats.runs += runs;
  return leaves;
}

}  // namespace

Verdict check_sni_concrete(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                           const CheckOptions& opt) {
  return check_sni_with(p, policy, [&](const Configuration& sigma) { return combined_run(sem, p, sigma, opt.am); },
                        opt);
}

Verdict check_sni_with(const Program& p, const Policy& policy, const Runner& runner, const CheckOptions& opt) {
  Verdict v;
  RunCtx ctx{p, policy, runner, opt};
  const Value domain = Value{1} << std::min(opt.domain_bits, opt.width.bits);
  auto leaves = collect_leaves(ctx, domain, opt.threads, v.stats);
  v.stats.leaves = leaves.size();

  bool exhausted = false;
  std::map<Trace, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto& l = leaves[i];
    v.stats.max_steps = std::max(v.stats.max_steps, l.result.steps);
    if (l.result.status == RunStatus::fuel_exhausted) {
      exhausted = true;
      continue;
    }
    l.ns = ns_project(l.result.trace);
    l.hash = hash_trace(l.result.trace);
    groups[l.ns].push_back(i);
  }

  std::vector<std::vector<std::size_t>> group_list;
  for (auto& [ns, idx] : groups) group_list.push_back(std::move(idx));
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::pair<std::size_t, std::size_t>> best(group_list.size(), {kNone, kNone});
  std::vector<std::uint64_t> compared(group_list.size(), 0);
  parallel_for(group_list.size(), opt.threads, [&](std::size_t g) {
    const auto& idx = group_list[g];
    bool uniform = std::all_of(idx.begin(), idx.end(),
                               [&](std::size_t i) { return leaves[i].hash == leaves[idx.front()].hash; });
    if (uniform) {
      // Equal hashes still need a real comparison: collisions are possible.
      bool all_equal = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) {
        return leaves[i].result.trace == leaves[idx.front()].result.trace;
      });
      if (all_equal) return;
    }
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        const Leaf& x = leaves[idx[a]];
        const Leaf& y = leaves[idx[b]];
        ++compared[g];
        if (x.hash == y.hash && x.result.trace == y.result.trace) continue;
        if (!compatible(x.inputs, y.inputs, policy)) continue;
        best[g] = {idx[a], idx[b]};
        return;
      }
    }
  });
  std::pair<std::size_t, std::size_t> first{kNone, kNone};
  for (std::size_t g = 0; g < best.size(); ++g) {
    v.stats.pairs_compared += compared[g];
    first = std::min(first, best[g]);
  }

  if (first.first != kNone) {
    const Leaf& x = leaves[first.first];
    const Leaf& y = leaves[first.second];
    Witness w;
    w.inputs1 = x.inputs;
    w.inputs2 = y.inputs;
    share_public(w.inputs1, y.inputs, policy);
    share_public(w.inputs2, x.inputs, policy);
    w.trace1 = x.result.trace;
    w.trace2 = y.result.trace;
    w.first_difference = first_difference(w.trace1, w.trace2);
    v.status = VerdictStatus::insecure;
    v.witness = std::move(w);
  } else if (exhausted) {
    v.status = VerdictStatus::inconclusive;
    v.diagnosis = "some runs exhausted the fuel bound";
  }
  return v;
}

namespace {

bool has_value(ObsKind k) {
  return k == ObsKind::load || k == ObsKind::store || k == ObsKind::pc || k == ObsKind::ret ||
         k == ObsKind::skip;
}

SymTrace without_pathconds(const SymTrace& t) {
  SymTrace out;
  for (const auto& o : t)
    if (o.kind != ObsKind::pathcond) out.push_back(o);
  return out;
}

bool same_shape(const SymObservation& a, const SymObservation& b) {
  return a.kind == b.kind && a.fn == b.fn && a.src == b.src && a.id == b.id;
}

struct SymLeafView {
  const SymAmLeaf* leaf;
  SymTrace full;
  SymTrace ns;
  std::vector<SymExpr> path;
};

SymLeafView view_of(const SymAmLeaf& l) {
  SymLeafView v{&l, without_pathconds(l.trace), {}, l.path.constraints()};
  v.ns = without_pathconds(ns_project(l.trace));
  return v;
}

// Query for "equal non-speculative projections, different traces". Returns
// false when the pair is decided without the solver (no violation possible).
bool build_query(const SymLeafView& a, const SymLeafView& b, Width w, std::vector<SymExpr>& cross) {
  if (a.ns.size() != b.ns.size()) return false;
  for (std::size_t i = 0; i < a.ns.size(); ++i) {
    const auto& x = a.ns[i];
    const auto& y = b.ns[i];
    if (!same_shape(x, y)) return false;
    if (!has_value(x.kind) || same(x.value, y.value)) continue;
    if (x.value->is_lit() && y.value->is_lit()) return false;
    cross.push_back(SymNode::bin(BinOp::eq, x.value, y.value, w));
  }
  bool shape_differs = a.full.size() != b.full.size();
  std::vector<SymExpr> eqs;
  for (std::size_t i = 0; !shape_differs && i < a.full.size(); ++i) {
    const auto& x = a.full[i];
    const auto& y = b.full[i];
    if (!same_shape(x, y)) {
      shape_differs = true;
      break;
    }
    if (!has_value(x.kind) || same(x.value, y.value)) continue;
    if (x.value->is_lit() && y.value->is_lit()) {
      shape_differs = true;
      break;
    }
    eqs.push_back(SymNode::bin(BinOp::eq, x.value, y.value, w));
  }
  if (shape_differs) return true;
  if (eqs.empty()) return false;
  SymExpr all = eqs.front();
  for (std::size_t i = 1; i < eqs.size(); ++i) all = SymNode::bin(BinOp::band, all, eqs[i], w);
  cross.push_back(SymNode::un(UnOp::lnot, all, w));
  return true;
}

// Splits constraints into groups connected by shared symbols.
std::vector<std::vector<std::size_t>> components(const std::vector<SymExpr>& cs) {
  std::vector<std::size_t> parent(cs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  std::map<Symbol, std::size_t> owner;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (const auto& s : cs[i]->symbols()) {
      auto [it, fresh] = owner.emplace(s, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t i = 0; i < cs.size(); ++i) by_root[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [r, v] : by_root) out.push_back(std::move(v));
  return out;
}

// tag: 0 from the first run's path, 1 from the second's, 2 cross constraint.
std::optional<Assignment> solve_pair(const std::vector<SymExpr>& cs, const std::vector<int>& tag,
                                     const Solver& solver) {
  Assignment model;
  for (const auto& comp : components(cs)) {
    bool mixed = false;
    for (std::size_t i : comp) mixed |= tag[i] != tag[comp.front()] || tag[i] == 2;
    std::vector<SymExpr> sub;
    for (std::size_t i : comp) sub.push_back(cs[i]);
    std::optional<Assignment> found;
    solver.enumerate(sub, {}, [&](const Assignment& a) {
      found = a;
      return false;
    });
    // A component from one path alone is satisfiable because the path is.
    if (!found && mixed) return std::nullopt;
    if (!found) continue;
    model.insert(found->begin(), found->end());
  }
  return model;
}

Inputs inputs_for_copy(const Assignment& model, unsigned copy) {
  Inputs in;
  for (const auto& [sym, v] : model)
    if (sym.copy == 0 || sym.copy == copy) in[sym.loc] = v;
  return in;
}

}  // namespace

Verdict check_sni_symbolic(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                           const CheckOptions& opt) {
  Verdict v;
  ExhaustiveSolver solver(std::min(opt.domain_bits, opt.width.bits), opt.width);
  auto run = [&](unsigned copy) {
    auto sigma = make_initial_sym_config(p, policy, opt.width, copy);
    return combined_sym_run(sem, p, sigma, opt.am, solver);
  };
  const auto left = run(1);
  const auto right = run(2);
  v.stats.runs = 2;
  v.stats.leaves = left.size() + right.size();

  bool exhausted = false;
  std::vector<SymLeafView> lv, rv;
  for (const auto& l : left) {
    if (l.status == RunStatus::fuel_exhausted) exhausted = true;
    else lv.push_back(view_of(l));
  }
  for (const auto& l : right)
    if (l.status != RunStatus::fuel_exhausted) rv.push_back(view_of(l));

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hit(lv.size(), kNone);
  std::vector<std::optional<Assignment>> models(lv.size());
  std::vector<std::uint64_t> compared(lv.size(), 0), queries(lv.size(), 0);
  std::atomic<std::size_t> found_row{kNone};
  parallel_for(lv.size(), opt.threads, [&](std::size_t i) {
    if (i > found_row.load()) return;
    for (std::size_t j = 0; j < rv.size(); ++j) {
      ++compared[i];
      std::vector<SymExpr> cross;
      if (!build_query(lv[i], rv[j], opt.width, cross)) continue;
      std::vector<SymExpr> cs;
      std::vector<int> tag;
      for (const auto& c : lv[i].path) cs.push_back(c), tag.push_back(0);
      for (const auto& c : rv[j].path) cs.push_back(c), tag.push_back(1);
      for (const auto& c : cross) cs.push_back(c), tag.push_back(2);
      ++queries[i];
      if (auto m = solve_pair(cs, tag, solver)) {
        hit[i] = j;
        models[i] = std::move(m);
        std::size_t cur = found_row.load();
        while (i < cur && !found_row.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });
  for (std::size_t i = 0; i < lv.size(); ++i) {
    v.stats.pairs_compared += compared[i];
    v.stats.solver_queries += queries[i];
  }

  for (std::size_t i = 0; i < lv.size(); ++i) {
    if (hit[i] == kNone) continue;
    Witness w;
    w.inputs1 = inputs_for_copy(*models[i], 1);
    w.inputs2 = inputs_for_copy(*models[i], 2);
    auto s1 = make_initial_configuration(p, policy, opt.width, w.inputs1);
    auto s2 = make_initial_configuration(p, policy, opt.width, w.inputs2);
    w.trace1 = combined_run(sem, p, s1, opt.am).trace;
    w.trace2 = combined_run(sem, p, s2, opt.am).trace;
    w.first_difference = first_difference(w.trace1, w.trace2);
    v.status = VerdictStatus::insecure;
    v.witness = std::move(w);
    return v;
  }
  if (exhausted) {
    v.status = VerdictStatus::inconclusive;
    v.diagnosis = "some symbolic paths exhausted the fuel bound";
  }
  return v;
}

bool replay_witness(const Witness& w, const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                    const CheckOptions& opt) {
  auto s1 = make_initial_configuration(p, policy, opt.width, w.inputs1);
  auto s2 = make_initial_configuration(p, policy, opt.width, w.inputs2);
  if (!low_equivalent(s1, s2, policy)) return false;
  auto r1 = combined_run(sem, p, s1, opt.am);
  auto r2 = combined_run(sem, p, s2, opt.am);
  if (r1.status == RunStatus::fuel_exhausted || r2.status == RunStatus::fuel_exhausted) return false;
  return r1.trace == w.trace1 && r2.trace == w.trace2 && ns_project(r1.trace) == ns_project(r2.trace) &&
         r1.trace != r2.trace;
}

OverapproxReport check_oracle_overapprox(const Program& p, const Policy& policy, const CombinedDescriptor& sem,
                                         const std::vector<Oracle>& family, const CheckOptions& opt) {
  OverapproxReport rep;
  rep.am_verdict = check_sni_concrete(p, policy, sem, opt).status;
  if (rep.am_verdict != VerdictStatus::secure) return rep;
  OracleParams op{opt.am.window, opt.am.rsb_size, opt.am.fuel, 16};
  CheckOptions inner = opt;
  inner.threads = 1;
  for (const auto& o : family) {
    ++rep.oracles_checked;
    auto v = check_sni_with(
        p, policy, [&](const Configuration& sigma) { return oracle_run(p, sigma, sem.parts, o, op); }, inner);
    if (v.status == VerdictStatus::insecure) {
      rep.counterexample = o.name;
      rep.witness = std::move(v.witness);
      return rep;
    }
  }
  return rep;
}

}  // namespace specomp
