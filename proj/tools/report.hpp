#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "corpus.hpp"

namespace specomp::tools {

using ordered_json = nlohmann::ordered_json;

ordered_json trace_json(const Trace& t);
ordered_json inputs_json(const Inputs& in);
ordered_json options_json(const std::string& sem, const CheckOptions& o, Mode mode);
ordered_json verdict_json(const Verdict& v);

std::string to_string(Mode m);

/// Human-readable verdict with the witness, if any.
std::string describe(const Verdict& v);

}  // namespace specomp::tools
