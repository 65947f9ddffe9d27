// Command-line front end; talks to the engine only through the C API.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dappcheck/dappcheck.h"

namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string message;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  dc_string_free(s);
  return out;
}

void check(dc_status st, const std::string& context) {
  if (st != DC_OK)
    throw Failure{context + ": " + dc_status_name(st) + ": " + dc_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Failure{"cannot write " + path};
  out << text;
}

struct Handles {
  dc_program* program = nullptr;
  dc_chain* chain = nullptr;
  dc_analysis* analysis = nullptr;
  ~Handles() {
    dc_analysis_free(analysis);
    dc_chain_free(chain);
    dc_program_free(program);
  }
};

struct ChainArgs {
  std::string mock;
  std::string rpc;
};

struct LimitArgs {
  std::size_t max_depth = 0, loop_bound = 0, max_states = 0;
  bool strict_supply = false;

  dc_options options() const {
    dc_options o;
    dc_options_default(&o);
    if (max_depth) o.max_depth = max_depth;
    if (loop_bound) o.loop_bound = loop_bound;
    if (max_states) o.max_states = max_states;
    o.strict_supply = strict_supply;
    return o;
  }
};

void open_chain(const ChainArgs& c, Handles& h) {
  std::string rpc = c.rpc;
  if (c.mock.empty() && rpc.empty())
    if (const char* env = std::getenv("CHAIN_RPC_URL")) rpc = env;
  if (!c.mock.empty()) {
    check(dc_chain_open_mock(c.mock.c_str(), &h.chain), c.mock);
  } else if (!rpc.empty()) {
    check(dc_chain_open_rpc(rpc.c_str(), &h.chain), rpc);
  }
}

void analyze(const std::string& ir, const ChainArgs& chain, const LimitArgs& limits, Handles& h) {
  check(dc_program_load(ir.c_str(), &h.program), ir);
  open_chain(chain, h);
  dc_options o = limits.options();
  check(dc_analyze(h.program, h.chain, &o, &h.analysis), ir);
}

std::string llm_url(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("LLM_ENDPOINT_URL")) return env;
  throw Failure{"a description needs --llm-url or LLM_ENDPOINT_URL"};
}

std::string attributes_from(const std::string& attrs, const std::string& description,
                            const std::string& llm) {
  if (!attrs.empty()) return read_file(attrs);
  std::string text = read_file(description);
  char* out = nullptr;
  char* warnings = nullptr;
  check(dc_extract_description(text.c_str(), llm_url(llm).c_str(), &out, &warnings), description);
  std::string w = take(warnings);
  if (w != "[]") std::cerr << "extraction warnings: " << w << "\n";
  return take(out);
}

// Returns the number of fired findings.
std::size_t audit_one(const std::string& ir, const std::string& attrs_json, const ChainArgs& chain,
                      const LimitArgs& limits, const std::string& facts_dir,
                      const std::string& out_path) {
  Handles h;
  analyze(ir, chain, limits, h);
  if (!facts_dir.empty()) check(dc_analysis_dump_facts(h.analysis, facts_dir.c_str()), facts_dir);
  char* report = nullptr;
  std::size_t fired = 0;
  check(dc_audit(h.analysis, attrs_json.c_str(), h.chain, &report, &fired), ir);
  write_output(out_path, take(report));
  return fired;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audits contract IR against front-end claims"};
  app.require_subcommand(1);

  std::string ir, ir_dir, attrs, description, llm, out, facts_dir, responses;
  ChainArgs chain;
  LimitArgs limits;
  unsigned jobs = 1;

  auto add_chain = [&](CLI::App* cmd) {
    auto mock = cmd->add_option("--chain", chain.mock, "mock chain state JSON");
    cmd->add_option("--rpc", chain.rpc, "JSON-RPC endpoint (default $CHAIN_RPC_URL)")->excludes(mock);
  };
  auto add_limits = [&](CLI::App* cmd) {
    cmd->add_option("--max-depth", limits.max_depth)->check(CLI::PositiveNumber);
    cmd->add_option("--loop-bound", limits.loop_bound)->check(CLI::PositiveNumber);
    cmd->add_option("--max-states", limits.max_states)->check(CLI::PositiveNumber);
  };

  auto* audit = app.add_subcommand("audit", "full pipeline, writes a report");
  auto* ir_opt = audit->add_option("--ir", ir, "IR file");
  audit->add_option("--ir-dir", ir_dir, "directory of <name>.ir with <name>.attrs.json")
      ->excludes(ir_opt);
  auto* attrs_opt = audit->add_option("--attrs", attrs, "attributes JSON");
  audit->add_option("--description", description, "description text (queries the LLM)")
      ->excludes(attrs_opt);
  audit->add_option("--llm-url", llm, "LLM endpoint (default $LLM_ENDPOINT_URL)");
  audit->add_option("--out", out, "report path, or directory with --ir-dir");
  audit->add_option("--facts-dump", facts_dir, "write relation TSVs here");
  audit->add_option("--jobs", jobs, "contracts processed in parallel")->check(CLI::PositiveNumber);
  audit->add_flag("--strict-supply", limits.strict_supply, "accept bound checks after the addition");
  add_chain(audit);
  add_limits(audit);

  auto* facts = app.add_subcommand("facts", "dump base relations as TSV");
  facts->add_option("--ir", ir)->required();
  facts->add_option("--out", out, "output directory")->required();

  auto* symexec = app.add_subcommand("symexec", "print captured checkpoints");
  symexec->add_option("--ir", ir)->required();
  symexec->add_option("--out", out);
  add_chain(symexec);
  add_limits(symexec);

  auto* extract = app.add_subcommand("extract", "description or canned answers to attributes");
  auto* resp_opt = extract->add_option("--responses", responses, "canned LLM answers JSON");
  extract->add_option("--description", description)->excludes(resp_opt);
  extract->add_option("--llm-url", llm);
  extract->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*audit) {
      if (ir.empty() == ir_dir.empty()) throw Failure{"give exactly one of --ir or --ir-dir"};
      if (!ir.empty()) {
        if (attrs.empty() == description.empty())
          throw Failure{"give exactly one of --attrs or --description"};
        if (!fs::exists(ir)) throw Failure{"no such IR file: " + ir};
        return audit_one(ir, attributes_from(attrs, description, llm), chain, limits, facts_dir, out) > 0
                   ? 1 : 0;
      }
      std::vector<fs::path> irs;
      for (const auto& e : fs::directory_iterator(ir_dir))
        if (e.path().extension() == ".ir") irs.push_back(e.path());
      std::sort(irs.begin(), irs.end());
      if (!out.empty()) fs::create_directories(out);
      std::vector<std::size_t> fired(irs.size());
      std::vector<std::string> errors(irs.size());
      auto run = [&](std::size_t i) {
        try {
          fs::path p = irs[i];
          fs::path attrs_path = p.parent_path() / (p.stem().string() + ".attrs.json");
          std::string report = out.empty() ? "" : (fs::path(out) / (p.stem().string() + ".report.json")).string();
          std::string facts = facts_dir.empty() ? "" : (fs::path(facts_dir) / p.stem()).string();
          fired[i] = audit_one(p.string(), read_file(attrs_path.string()), chain, limits, facts,
                               report.empty() ? "/dev/null" : report);
        } catch (const Failure& f) {
          errors[i] = f.message;
        }
      };
      for (std::size_t start = 0; start < irs.size(); start += jobs) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = start; i < std::min(irs.size(), start + jobs); ++i)
          batch.push_back(std::async(std::launch::async, run, i));
        for (auto& f : batch) f.get();
      }
      bool any_error = false, any_fired = false;
      for (std::size_t i = 0; i < irs.size(); ++i) {
        if (!errors[i].empty()) {
          std::cerr << "error: " << errors[i] << "\n";
          any_error = true;
        } else {
          std::cout << irs[i].filename().string() << "\t" << fired[i] << "\n";
          any_fired = any_fired || fired[i] > 0;
        }
      }
      return any_error ? 2 : any_fired ? 1 : 0;
    }
    if (*facts) {
      Handles h;
      analyze(ir, {}, {}, h);
      check(dc_analysis_dump_facts(h.analysis, out.c_str()), out);
      return 0;
    }
    if (*symexec) {
      Handles h;
      analyze(ir, chain, limits, h);
      char* cps = nullptr;
      check(dc_analysis_checkpoints(h.analysis, &cps), ir);
      write_output(out, take(cps));
      return 0;
    }
    if (*extract) {
      std::string attrs_json;
      if (!responses.empty()) {
        char* a = nullptr;
        char* w = nullptr;
        check(dc_extract_responses(read_file(responses).c_str(), &a, &w), responses);
        std::string warnings = take(w);
        if (warnings != "[]") std::cerr << "extraction warnings: " << warnings << "\n";
        attrs_json = take(a);
      } else if (!description.empty()) {
        attrs_json = attributes_from("", description, llm);
      } else {
        throw Failure{"give --responses or --description"};
      }
      write_output(out, attrs_json + "\n");
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
