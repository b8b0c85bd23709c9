#include "report.hpp"

#include <sstream>

namespace specomp::tools {

std::string to_string(Mode m) { return m == Mode::concrete ? "concrete" : "symbolic"; }

ordered_json trace_json(const Trace& t) { return ordered_json::parse(trace_to_json(t)); }

ordered_json inputs_json(const Inputs& in) {
  auto regs = ordered_json::object();
  auto mem = ordered_json::array();
  for (const auto& [loc, v] : in) {
    if (loc.is_reg()) regs[loc.reg] = v;
    else mem.push_back({{"addr", loc.addr}, {"value", v}});
  }
  return {{"registers", regs}, {"memory", mem}};
}

ordered_json options_json(const std::string& sem, const CheckOptions& o, Mode mode) {
  return {{"sem", sem},
          {"mode", to_string(mode)},
          {"window", o.am.window},
          {"rsb_size", o.am.rsb_size},
          {"bits", o.width.bits},
          {"domain_bits", o.domain_bits},
          {"fuel", o.am.fuel}};
}

ordered_json verdict_json(const Verdict& v) {
  ordered_json j;
  j["verdict"] = std::string(to_string(v.status));
  if (v.witness) {
    const auto& w = *v.witness;
    j["witness"] = {{"inputs1", inputs_json(w.inputs1)},
                    {"inputs2", inputs_json(w.inputs2)},
                    {"first_difference", w.first_difference},
                    {"trace1", trace_json(w.trace1)},
                    {"trace2", trace_json(w.trace2)}};
  }
  j["stats"] = {{"runs", v.stats.runs},
                {"leaves", v.stats.leaves},
                {"pairs_compared", v.stats.pairs_compared},
                {"solver_queries", v.stats.solver_queries},
                {"max_steps", v.stats.max_steps}};
  if (!v.diagnosis.empty()) j["diagnosis"] = v.diagnosis;
  return j;
}

namespace {

std::string inputs_text(const Inputs& in) {
  std::string out;
  for (const auto& [loc, v] : in) {
    if (!out.empty()) out += ", ";
    out += loc.is_reg() ? loc.reg : "m[" + std::to_string(loc.addr) + "]";
    out += "=" + std::to_string(v);
  }
  return out.empty() ? "(all zero)" : out;
}

}  // namespace

std::string describe(const Verdict& v) {
  std::ostringstream out;
  out << to_string(v.status) << "\n";
  if (v.witness) {
    const auto& w = *v.witness;
    out << "run 1 inputs: " << inputs_text(w.inputs1) << "\n";
    out << "run 2 inputs: " << inputs_text(w.inputs2) << "\n";
    out << "traces differ at observation " << w.first_difference << "\n";
    out << "trace 1: " << to_string(w.trace1) << "\n";
    out << "trace 2: " << to_string(w.trace2) << "\n";
  }
  if (!v.diagnosis.empty()) out << v.diagnosis << "\n";
  out << "runs " << v.stats.runs << ", leaves " << v.stats.leaves << ", pairs " << v.stats.pairs_compared
      << ", solver queries " << v.stats.solver_queries << "\n";
  return out.str();
}

}  // namespace specomp::tools
