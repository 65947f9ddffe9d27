#include "pipeline/pipeline.hpp"

#include <json.hpp>

namespace dappcheck::pipeline {

Analysis analyze(ir::Program program, chain::ChainState* chain,
                 const infer::SignatureDictionary& dict, const Options& opts) {
  Analysis a{std::move(program), {}, {}, {}, {}, {}, {}, {}};
  a.db = facts::derive_base_facts(a.program);
  a.inference = infer::infer_all(a.db, a.program, dict);
  a.ftg = graphs::build_ftg(a.db, a.program, a.inference);
  a.sdg = graphs::build_sdg(a.db, a.program, a.inference);
  a.plan = graphs::plan_symexec(a.program, a.ftg, a.sdg);
  a.exploration = symexec::explore(a.program, a.plan, opts.limits);
  a.semantics = symexec::summarize_semantics(a.program, a.db, a.inference, a.ftg, a.sdg,
                                             a.exploration, chain, {opts.strict_supply});
  return a;
}

detect::Report audit(const Analysis& analysis, const frontend::Attributes& attrs,
                     chain::ChainState* chain) {
  return detect::detect_all(attrs, analysis.semantics, chain);
}

std::string checkpoints_json(const Analysis& analysis) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& cp : analysis.exploration.checkpoints) {
    nlohmann::ordered_json j;
    j["statement"] = cp.statement;
    j["selector"] = cp.selector.str();
    j["path"] = cp.path_id;
    j["occurrence"] = cp.occurrence;
    j["feasibility"] = symexec::verdict_name(cp.feasibility);
    nlohmann::ordered_json cap = nlohmann::ordered_json::object();
    for (const auto& [label, e] : cp.captured) cap[label] = symexec::render(e);
    j["captured"] = cap;
    nlohmann::ordered_json path = nlohmann::ordered_json::array();
    for (const auto& c : cp.path) path.push_back(symexec::render(c));
    j["constraints"] = path;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

}  // namespace dappcheck::pipeline
