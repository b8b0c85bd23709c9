#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specomp/lang/value.hpp"

namespace specomp {

/// Speculation source of a transaction.
enum class Source : std::uint8_t { B, S, R };

std::string_view to_string(Source s);
std::optional<Source> parse_source(std::string_view s);

enum class ObsKind : std::uint8_t { load, store, pc, call, ret, start, rollback, skip, pathcond };

std::string_view to_string(ObsKind k);

/// One attacker-visible event. `V` is Value for concrete runs and a symbolic
/// expression for symbolic runs. `value` holds the address / target / pc /
/// path constraint depending on the kind; `fn` is used by call only;
/// `src`/`id` by start and rollback only.
template <class V>
struct BasicObservation {
  ObsKind kind = ObsKind::pc;
  V value{};
  std::string fn;
  Source src = Source::B;
  std::uint64_t id = 0;

  static BasicObservation make(ObsKind k, V v = V{}, std::string f = {}, Source s = Source::B,
                               std::uint64_t i = 0) {
    BasicObservation o;
    o.kind = k;
    o.value = std::move(v);
    o.fn = std::move(f);
    o.src = s;
    o.id = i;
    return o;
  }
  static BasicObservation load(V a) { return make(ObsKind::load, std::move(a)); }
  static BasicObservation store(V a) { return make(ObsKind::store, std::move(a)); }
  static BasicObservation pc(V t) { return make(ObsKind::pc, std::move(t)); }
  static BasicObservation call(std::string f) { return make(ObsKind::call, V{}, std::move(f)); }
  static BasicObservation ret(V l) { return make(ObsKind::ret, std::move(l)); }
  static BasicObservation start(Source s, std::uint64_t i) { return make(ObsKind::start, V{}, {}, s, i); }
  static BasicObservation rollback(Source s, std::uint64_t i) {
    return make(ObsKind::rollback, V{}, {}, s, i);
  }
  static BasicObservation skip(V pc) { return make(ObsKind::skip, std::move(pc)); }
  static BasicObservation pathcond(V c) { return make(ObsKind::pathcond, std::move(c)); }

  bool is_marker() const {
    return kind == ObsKind::start || kind == ObsKind::rollback || kind == ObsKind::skip;
  }
};

template <class V>
using BasicTrace = std::vector<BasicObservation<V>>;

using Observation = BasicObservation<Value>;
using Trace = BasicTrace<Value>;

bool operator==(const Observation& a, const Observation& b);
inline bool operator!=(const Observation& a, const Observation& b) { return !(a == b); }
/// Total order consistent with ==, for sets of traces.
bool operator<(const Observation& a, const Observation& b);

std::string to_string(const Observation& o);
std::string to_string(const Trace& t);

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class V, class Drop>
BasicTrace<V> strip_transactions(const BasicTrace<V>& t, Drop drop_source, bool drop_skip) {
  struct Open {
    Source src;
    std::uint64_t id;
    std::size_t out_size;
    bool dropped;
  };
  BasicTrace<V> out;
  std::vector<Open> open;
  for (const auto& o : t) {
    switch (o.kind) {
      case ObsKind::start: {
        bool dropped = drop_source(o.src);
        open.push_back({o.src, o.id, out.size(), dropped});
        if (!dropped) out.push_back(o);
        break;
      }
      case ObsKind::rollback: {
        if (open.empty() || open.back().src != o.src || open.back().id != o.id) {
          throw BracketError("rollback(" + std::string(to_string(o.src)) + "," + std::to_string(o.id) +
                             ") does not close the innermost open transaction");
        }
        auto top = open.back();
        open.pop_back();
        if (top.dropped) {
          out.resize(top.out_size);
        } else {
          out.push_back(o);
        }
        break;
      }
      case ObsKind::skip:
        if (!drop_skip) out.push_back(o);
        break;
      default:
        out.push_back(o);
    }
  }
  // Transactions still open when the trace ends never committed: their
  // observations are speculative.
  for (const auto& o : open) {
    if (o.dropped) {
      out.resize(o.out_size);
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Non-speculative projection: removes every start…rollback segment of any
/// source, innermost-out, and all skip markers. Throws BracketError on a
/// rollback that does not close the innermost open transaction.
template <class V>
BasicTrace<V> ns_project(const BasicTrace<V>& t) {
  return detail::strip_transactions(t, [](Source) { return true; }, true);
}

/// Projection onto one source: removes the transactions of every other
/// source (with everything nested inside them); markers of `keep` remain.
template <class V>
BasicTrace<V> project_trace(const BasicTrace<V>& t, Source keep) {
  return detail::strip_transactions(t, [keep](Source s) { return s != keep; }, false);
}

/// Renumbers transaction ids by order of first appearance (0, 1, ...).
template <class V>
BasicTrace<V> canonicalize_ids(BasicTrace<V> t) {
  std::map<std::uint64_t, std::uint64_t> ids;
  for (auto& o : t) {
    if (o.kind != ObsKind::start && o.kind != ObsKind::rollback) continue;
    auto [it, inserted] = ids.emplace(o.id, ids.size());
    o.id = it->second;
  }
  return t;
}

/// Serializes a concrete trace as a JSON array of tagged objects.
std::string trace_to_json(const Trace& t);
Trace trace_from_json(std::string_view text);

}  // namespace specomp
