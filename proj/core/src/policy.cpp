#include "specomp/lang/policy.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace specomp {

bool Policy::is_public(const Location& loc) const {
  if (loc.is_reg()) {
    return loc.reg == kPcReg || loc.reg == kSpReg || public_registers.count(loc.reg) > 0;
  }
  for (const auto& r : public_memory)
    if (r.contains(loc.addr)) return true;
  return false;
}

Policy Policy::from_json(std::string_view text) {
  Policy p;
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw PolicyError("policy must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "public_registers") {
        for (const auto& r : value) p.public_registers.insert(r.get<std::string>());
      } else if (key == "public_memory") {
        for (const auto& r : value) {
          AddrRange range{r.at("lo").get<Addr>(), r.at("hi").get<Addr>()};
          if (range.hi < range.lo) throw PolicyError("public_memory range with hi < lo");
          p.public_memory.push_back(range);
        }
      } else if (key == "init_memory") {
        for (const auto& c : value) p.init_memory[c.at("addr").get<Addr>()] = c.at("value").get<Value>();
      } else if (key == "init_registers") {
        for (const auto& [name, v] : value.items()) {
          if (name == kPcReg) throw PolicyError("pc cannot be initialized; it starts at the entry point");
          p.init_registers[name] = v.get<Value>();
        }
      } else if (key.rfind("_", 0) != 0) {
        throw PolicyError("unknown policy field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw PolicyError(std::string("malformed policy: ") + e.what());
  }
  return p;
}

std::string Policy::to_json() const {
  nlohmann::ordered_json j;
  j["public_registers"] = public_registers;
  auto mem = nlohmann::ordered_json::array();
  for (const auto& r : public_memory) mem.push_back({{"lo", r.lo}, {"hi", r.hi}});
  j["public_memory"] = mem;
  auto init = nlohmann::ordered_json::array();
  for (const auto& [a, v] : init_memory) init.push_back({{"addr", a}, {"value", v}});
  j["init_memory"] = init;
  j["init_registers"] = init_registers;
  return j.dump();
}

Policy load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PolicyError("cannot read policy file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return Policy::from_json(ss.str());
}

}  // namespace specomp
