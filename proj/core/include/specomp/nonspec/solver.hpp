#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "specomp/nonspec/sym_expr.hpp"

namespace specomp {

/// Persistent conjunction of constraints (each read as "≠ 0"). Extending a
/// path shares the tail with its parent.
class PathCondition {
 public:
  PathCondition() = default;

  PathCondition with(SymExpr c) const;
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  /// Constraints, oldest first.
  std::vector<SymExpr> constraints() const;

 private:
  struct Node {
    SymExpr c;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
  std::size_t size_ = 0;
};

/// Decision procedure for constraints over symbols ranging over a finite
/// domain.
class Solver {
 public:
  virtual ~Solver() = default;

  /// Calls `visit` for every assignment to `symbols` (plus the symbols of the
  /// constraints) satisfying all constraints, until it returns false.
  virtual void enumerate(const std::vector<SymExpr>& constraints, const std::vector<Symbol>& symbols,
                         const std::function<bool(const Assignment&)>& visit) const = 0;

  virtual Width width() const = 0;
  /// Number of values a symbol ranges over: {0, ..., domain_size() - 1}.
  virtual Value domain_size() const = 0;

  bool satisfiable(const std::vector<SymExpr>& constraints) const;
  bool satisfiable(const PathCondition& path, const SymExpr& extra) const;
  /// Sorted values `e` can take under `path`.
  std::vector<Value> feasible_values(const PathCondition& path, const SymExpr& e) const;
};

/// Backtracking over the domain, restricted to the constraints connected to
/// the query.
class ExhaustiveSolver final : public Solver {
 public:
  ExhaustiveSolver(unsigned domain_bits, Width width);

  void enumerate(const std::vector<SymExpr>& constraints, const std::vector<Symbol>& symbols,
                 const std::function<bool(const Assignment&)>& visit) const override;
  Width width() const override { return width_; }
  Value domain_size() const override { return domain_; }

 private:
  Value domain_;
  Width width_;
};

/// Constraints of `all` that share symbols, transitively, with `seed`.
std::vector<SymExpr> relevant_constraints(const std::vector<SymExpr>& all, std::vector<Symbol> seed);

}  // namespace specomp
