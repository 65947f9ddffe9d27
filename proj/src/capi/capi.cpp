#include "dappcheck/dappcheck.h"

#include <cstdlib>
#include <cstring>
#include <memory>

#include <json.hpp>

#include "errors.hpp"
#include "frontend/extract.hpp"
#include "frontend/llm.hpp"
#include "pipeline/pipeline.hpp"

using namespace dappcheck;

struct dc_program {
  ir::Program program;
};

struct dc_chain {
  std::unique_ptr<chain::ChainState> state;
};

struct dc_analysis {
  pipeline::Analysis analysis;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <typename F>
dc_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return DC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<dc_status>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return DC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return DC_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Word slot_arg(const char* slot) {
  auto w = parse_word(slot);
  require(w.has_value(), "bad slot");
  return *w;
}

const infer::SignatureDictionary& dictionary() {
  static const auto dict = infer::SignatureDictionary::load_default();
  return dict;
}

}  // namespace

extern "C" {

const char* dc_version(void) { return "0.1.0"; }

const char* dc_status_name(dc_status s) {
  switch (s) {
    case DC_OK: return "ok";
    case DC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DC_ERR_IO: return "io";
    case DC_ERR_SYNTAX: return "syntax";
    case DC_ERR_SSA_VIOLATION: return "ssa_violation";
    case DC_ERR_UNKNOWN_OPCODE: return "unknown_opcode";
    case DC_ERR_DANGLING_TARGET: return "dangling_target";
    case DC_ERR_RPC: return "rpc";
    case DC_ERR_MALFORMED_RESPONSE: return "malformed_response";
    case DC_ERR_MOCK_FORMAT: return "mock_format";
    case DC_ERR_NOT_A_STRING: return "not_a_string";
    case DC_ERR_UNBOUND_LEAF: return "unbound_leaf";
    case DC_ERR_ATTRIBUTES: return "attributes";
    case DC_ERR_LLM: return "llm";
    case DC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dc_last_error(void) { return last_error.c_str(); }

void dc_string_free(char* s) { std::free(s); }

void dc_options_default(dc_options* opts) {
  if (!opts) return;
  symexec::Limits l;
  opts->max_depth = l.max_depth;
  opts->loop_bound = l.loop_bound;
  opts->max_states = l.max_states;
  opts->strict_supply = 0;
}

dc_status dc_program_parse(const char* text, dc_program** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new dc_program{ir::parse_ir(text)};
  });
}

dc_status dc_program_load(const char* path, dc_program** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new dc_program{ir::load_ir(path)};
  });
}

dc_status dc_program_print(const dc_program* program, char** out) {
  return guarded([&] {
    require(program && out, "null argument");
    *out = dup(ir::print_ir(program->program));
  });
}

size_t dc_program_statement_count(const dc_program* program) {
  return program ? program->program.statement_count() : 0;
}

void dc_program_free(dc_program* program) { delete program; }

dc_status dc_chain_open_mock(const char* path, dc_chain** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new dc_chain{std::make_unique<chain::ChainState>(chain::MockBackend::load(path))};
  });
}

dc_status dc_chain_open_mock_json(const char* json, dc_chain** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = new dc_chain{std::make_unique<chain::ChainState>(chain::MockBackend::parse(json))};
  });
}

dc_status dc_chain_open_rpc(const char* url, dc_chain** out) {
  return guarded([&] {
    require(url && out, "null argument");
    chain::RpcOptions o;
    o.url = url;
    *out = new dc_chain{std::make_unique<chain::ChainState>(std::make_unique<chain::RpcBackend>(o))};
  });
}

dc_status dc_chain_get_storage(dc_chain* c, const char* address, const char* slot, char** out) {
  return guarded([&] {
    require(c && address && slot && out, "null argument");
    *out = dup(to_hex(c->state->get_storage(address, slot_arg(slot))));
  });
}

dc_status dc_chain_read_string(dc_chain* c, const char* address, const char* slot, char** out) {
  return guarded([&] {
    require(c && address && slot && out, "null argument");
    *out = dup(c->state->read_string_at(address, slot_arg(slot)));
  });
}

void dc_chain_free(dc_chain* chain) { delete chain; }

dc_status dc_analyze(const dc_program* program, dc_chain* chain, const dc_options* opts,
                     dc_analysis** out) {
  return guarded([&] {
    require(program && out, "null argument");
    pipeline::Options o;
    if (opts) {
      require(opts->max_depth > 0 && opts->loop_bound > 0 && opts->max_states > 0,
              "limits must be positive");
      o.limits = {opts->max_depth, opts->loop_bound, opts->max_states};
      o.strict_supply = opts->strict_supply != 0;
    }
    *out = new dc_analysis{
        pipeline::analyze(program->program, chain ? chain->state.get() : nullptr, dictionary(), o)};
  });
}

dc_status dc_analysis_checkpoints(const dc_analysis* a, char** out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = dup(pipeline::checkpoints_json(a->analysis));
  });
}

dc_status dc_analysis_plan(const dc_analysis* a, char** out) {
  return guarded([&] {
    require(a && out, "null argument");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& sel : a->analysis.plan.selectors()) arr.push_back(sel.str());
    *out = dup(arr.dump());
  });
}

dc_status dc_analysis_graphs(const dc_analysis* a, char** out) {
  return guarded([&] {
    require(a && out, "null argument");
    *out = dup(graphs::dump_graphs(a->analysis.ftg, a->analysis.sdg, a->analysis.plan));
  });
}

dc_status dc_analysis_dump_facts(const dc_analysis* a, const char* dir) {
  return guarded([&] {
    require(a && dir, "null argument");
    facts::dump_facts(a->analysis.db, a->analysis.program, dir);
  });
}

dc_status dc_audit(const dc_analysis* a, const char* attrs_json, dc_chain* chain, char** out,
                   size_t* fired) {
  return guarded([&] {
    require(a && attrs_json && out, "null argument");
    auto attrs = frontend::attributes_from_json(attrs_json);
    auto report = pipeline::audit(a->analysis, attrs, chain ? chain->state.get() : nullptr);
    *out = dup(report.dump());
    if (fired) *fired = report.fired().size();
  });
}

void dc_analysis_free(dc_analysis* analysis) { delete analysis; }

namespace {

void emit_extraction(const frontend::Extraction& ex, char** out_attrs, char** out_warnings) {
  *out_attrs = dup(frontend::attributes_to_json(ex.attrs));
  if (out_warnings) *out_warnings = dup(nlohmann::json(ex.warnings).dump());
}

}  // namespace

dc_status dc_extract_responses(const char* responses_json, char** out_attrs, char** out_warnings) {
  return guarded([&] {
    require(responses_json && out_attrs, "null argument");
    auto responses = frontend::ResponseSet::from_json(responses_json);
    emit_extraction(frontend::extract_attributes(responses, frontend::Synonyms::load_default()),
                    out_attrs, out_warnings);
  });
}

dc_status dc_extract_description(const char* description, const char* llm_url, char** out_attrs,
                                 char** out_warnings) {
  return guarded([&] {
    require(description && llm_url && out_attrs, "null argument");
    require(*description != '\0', "empty description");
    frontend::HttpLlmClient client(llm_url);
    frontend::WordPunctTokenizer tok;
    auto responses = frontend::query_description(client, description, tok,
                                                 frontend::Templates::load_default());
    emit_extraction(frontend::extract_attributes(responses, frontend::Synonyms::load_default()),
                    out_attrs, out_warnings);
  });
}

}  // extern "C"
