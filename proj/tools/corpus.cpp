#include "corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "specomp/lang/parser.hpp"

namespace specomp::tools {

namespace fs = std::filesystem;
using nlohmann::json;

RunParams RunParams::over(const RunParams& base) const {
  RunParams r = base;
  if (window) r.window = window;
  if (rsb_size) r.rsb_size = rsb_size;
  if (bits) r.bits = bits;
  if (domain_bits) r.domain_bits = domain_bits;
  if (fuel) r.fuel = fuel;
  return r;
}

CheckOptions RunParams::options(unsigned threads) const {
  CheckOptions o;
  if (window) o.am.window = *window;
  if (rsb_size) o.am.rsb_size = *rsb_size;
  if (fuel) o.am.fuel = *fuel;
  if (bits) o.width = Width{*bits};
  if (domain_bits) o.domain_bits = *domain_bits;
  o.threads = threads;
  return o;
}

std::optional<VerdictStatus> parse_verdict(std::string_view s) {
  if (s == "secure") return VerdictStatus::secure;
  if (s == "insecure") return VerdictStatus::insecure;
  if (s == "inconclusive") return VerdictStatus::inconclusive;
  return std::nullopt;
}

const Suite* Corpus::suite(std::string_view name) const {
  for (const auto& s : suites)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunParams params_of(const json& j) {
  RunParams p;
  if (j.contains("window")) p.window = j["window"].get<std::uint64_t>();
  if (j.contains("rsb_size")) p.rsb_size = j["rsb_size"].get<std::size_t>();
  if (j.contains("bits")) p.bits = j["bits"].get<unsigned>();
  if (j.contains("domain_bits")) p.domain_bits = j["domain_bits"].get<unsigned>();
  if (j.contains("fuel")) p.fuel = j["fuel"].get<std::uint64_t>();
  return p;
}

}  // namespace

Corpus load_corpus(const std::string& dir) {
  Corpus c;
  c.dir = fs::absolute(dir).string();
  json m;
  try {
    m = json::parse(read_file((fs::path(c.dir) / "manifest.json").string()));
    if (m.contains("defaults")) c.defaults = params_of(m["defaults"]);
    for (const auto& js : m.at("suites")) {
      Suite s;
      s.name = js.at("name").get<std::string>();
      s.semantics = js.at("semantics").get<std::vector<std::string>>();
      for (const auto& jc : js.at("cases")) {
        CorpusCase cc;
        cc.suite = s.name;
        cc.name = jc.at("name").get<std::string>();
        cc.row = jc.value("row", cc.name);
        cc.variant = jc.value("variant", "none");
        cc.program_path = (fs::path(c.dir) / jc.at("program").get<std::string>()).string();
        cc.policy_path = (fs::path(c.dir) / jc.at("policy").get<std::string>()).string();
        cc.description = jc.value("description", "");
        if (jc.contains("params")) cc.params = params_of(jc["params"]);
        for (const auto& [sem, v] : jc.at("expect").items()) {
          auto verdict = parse_verdict(v.get<std::string>());
          if (!verdict) throw CorpusError("case '" + cc.name + "': bad verdict '" + v.get<std::string>() + "'");
          cc.expect[parse_selector(sem).name()] = *verdict;
        }
        s.cases.push_back(std::move(cc));
      }
      c.suites.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw CorpusError(std::string("malformed manifest: ") + e.what());
  }
  return c;
}

LoadedCase load_case(const CorpusCase& c) {
  return {parse_program(read_file(c.program_path)), load_policy_file(c.policy_path)};
}

Verdict check(const Program& p, const Policy& policy, const CombinedDescriptor& sem, const CheckOptions& opt,
              Mode mode) {
  return mode == Mode::concrete ? check_sni_concrete(p, policy, sem, opt) : check_sni_symbolic(p, policy, sem, opt);
}

std::vector<CellResult> run_cells(const Corpus& corpus, const std::vector<const Suite*>& suites,
                                  const RunParams& overrides, Mode mode, const std::string& only_sem,
                                  unsigned threads) {
  const std::string only = only_sem.empty() ? "" : parse_selector(only_sem).name();
  std::vector<CellResult> cells;
  for (const Suite* s : suites) {
    for (const auto& c : s->cases) {
      for (const auto& sem_text : s->semantics) {
        std::string sem = parse_selector(sem_text).name();
        if (!only.empty() && sem != only) continue;
        CellResult r;
        r.which = &c;
        r.sem = sem;
        if (auto it = c.expect.find(sem); it != c.expect.end()) r.expected = it->second;
        cells.push_back(std::move(r));
      }
      if (!only.empty() && std::find_if(s->semantics.begin(), s->semantics.end(), [&](const std::string& t) {
                             return parse_selector(t).name() == only;
                           }) == s->semantics.end()) {
        CellResult r;
        r.which = &c;
        r.sem = only;
        cells.push_back(std::move(r));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        auto& cell = cells[i];
        auto loaded = load_case(*cell.which);
        auto params = overrides.over(cell.which->params.over(corpus.defaults));
        auto t0 = std::chrono::steady_clock::now();
        cell.verdict = check(loaded.program, loaded.policy, parse_selector(cell.sem), params.options(), mode);
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return cells;
}

std::string format_table(const std::vector<CellResult>& cells) {
  std::vector<std::string> rows, cols;
  std::map<std::pair<std::string, std::string>, const CellResult*> at;
  for (const auto& c : cells) {
    const std::string row = c.which->suite + "/" + c.which->row;
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
  }
  for (const auto& c : cells) {
    std::string col = c.which->variant == "none" ? c.sem : c.which->variant + ":" + c.sem;
    if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
    at[{c.which->suite + "/" + c.which->row, col}] = &c;
  }
  std::size_t w0 = 4;
  for (const auto& r : rows) w0 = std::max(w0, r.size());
  std::vector<std::size_t> w;
  for (const auto& c : cols) w.push_back(std::max<std::size_t>(c.size(), 5));

  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t n) { return s + std::string(n > s.size() ? n - s.size() : 0, ' '); };
  out << pad("case", w0);
  for (std::size_t i = 0; i < cols.size(); ++i) out << "  " << pad(cols[i], w[i]);
  out << "\n";
  for (const auto& r : rows) {
    out << pad(r, w0);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string mark = "";
      if (auto it = at.find({r, cols[i]}); it != at.end()) {
        const auto& c = *it->second;
        mark = c.verdict.status == VerdictStatus::secure     ? "ok"
               : c.verdict.status == VerdictStatus::insecure ? "LEAK"
                                                             : "?";
        if (!c.expected) mark += "*";
        else if (!c.matches()) mark += "!";
      }
      out << "  " << pad(mark, w[i]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace specomp::tools
