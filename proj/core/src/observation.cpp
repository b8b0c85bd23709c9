#include "specomp/nonspec/observation.hpp"

#include <nlohmann/json.hpp>
#include <tuple>

namespace specomp {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::B: return "B";
    case Source::S: return "S";
    case Source::R: return "R";
  }
  return "?";
}

std::optional<Source> parse_source(std::string_view s) {
  if (s == "B" || s == "b") return Source::B;
  if (s == "S" || s == "s") return Source::S;
  if (s == "R" || s == "r") return Source::R;
  return std::nullopt;
}

std::string_view to_string(ObsKind k) {
  switch (k) {
    case ObsKind::load: return "load";
    case ObsKind::store: return "store";
    case ObsKind::pc: return "pc";
    case ObsKind::call: return "call";
    case ObsKind::ret: return "ret";
    case ObsKind::start: return "start";
    case ObsKind::rollback: return "rollback";
    case ObsKind::skip: return "skip";
    case ObsKind::pathcond: return "pathcond";
  }
  return "?";
}

bool operator==(const Observation& a, const Observation& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ObsKind::call: return a.fn == b.fn;
    case ObsKind::start:
    case ObsKind::rollback: return a.src == b.src && a.id == b.id;
    default: return a.value == b.value;
  }
}

bool operator<(const Observation& a, const Observation& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  switch (a.kind) {
    case ObsKind::call: return a.fn < b.fn;
    case ObsKind::start:
    case ObsKind::rollback: return std::tie(a.src, a.id) < std::tie(b.src, b.id);
    default: return a.value < b.value;
  }
}

std::string to_string(const Observation& o) {
  std::string k(to_string(o.kind));
  switch (o.kind) {
    case ObsKind::call: return k + "(" + o.fn + ")";
    case ObsKind::start:
    case ObsKind::rollback:
      return k + "(" + std::string(to_string(o.src)) + "," + std::to_string(o.id) + ")";
    default: return k + "(" + std::to_string(o.value) + ")";
  }
}

std::string to_string(const Trace& t) {
  if (t.empty()) return "ε";
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " · ";
    out += to_string(t[i]);
  }
  return out;
}

namespace {

std::string_view value_field(ObsKind k) {
  switch (k) {
    case ObsKind::load:
    case ObsKind::store:
    case ObsKind::ret: return "addr";
    case ObsKind::pc: return "target";
    case ObsKind::skip: return "pc";
    case ObsKind::pathcond: return "cond";
    default: return "";
  }
}

}  // namespace

std::string trace_to_json(const Trace& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& o : t) {
    nlohmann::ordered_json j;
    j["t"] = to_string(o.kind);
    switch (o.kind) {
      case ObsKind::call: j["fn"] = o.fn; break;
      case ObsKind::start:
      case ObsKind::rollback:
        j["src"] = to_string(o.src);
        j["id"] = o.id;
        break;
      default: j[std::string(value_field(o.kind))] = o.value;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

Trace trace_from_json(std::string_view text) {
  auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("trace JSON must be an array");
  Trace t;
  for (const auto& j : arr) {
    auto tag = j.at("t").get<std::string>();
    std::optional<ObsKind> kind;
    for (int k = 0; k <= static_cast<int>(ObsKind::pathcond); ++k) {
      if (to_string(static_cast<ObsKind>(k)) == tag) kind = static_cast<ObsKind>(k);
    }
    if (!kind) throw std::invalid_argument("unknown observation tag '" + tag + "'");
    Observation o;
    o.kind = *kind;
    switch (o.kind) {
      case ObsKind::call: o.fn = j.at("fn").get<std::string>(); break;
      case ObsKind::start:
      case ObsKind::rollback: {
        auto src = parse_source(j.at("src").get<std::string>());
        if (!src) throw std::invalid_argument("unknown source in trace JSON");
        o.src = *src;
        o.id = j.at("id").get<std::uint64_t>();
        break;
      }
      default: o.value = j.at(std::string(value_field(o.kind))).get<Value>();
    }
    t.push_back(std::move(o));
  }
  return t;
}

}  // namespace specomp
