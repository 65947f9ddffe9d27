#pragma once

#include <string>

#include "chain/chain.hpp"
#include "detect/detector.hpp"
#include "facts/fact_db.hpp"
#include "frontend/attributes.hpp"
#include "graphs/graphs.hpp"
#include "infer/inference.hpp"
#include "infer/signatures.hpp"
#include "ir/program.hpp"
#include "symexec/semantics.hpp"

namespace dappcheck::pipeline {

struct Options {
  symexec::Limits limits;
  bool strict_supply = false;
};

/// Every intermediate product for one contract.
struct Analysis {
  ir::Program program;
  facts::FactDb db;
  infer::Inference inference;
  graphs::FundTransferGraph ftg;
  graphs::StateDependencyGraph sdg;
  graphs::AnalysisPlan plan;
  symexec::Exploration exploration;
  symexec::ContractSemantics semantics;
};

/// Facts through semantics. `chain` may be null.
Analysis analyze(ir::Program program, chain::ChainState* chain,
                 const infer::SignatureDictionary& dict, const Options& opts = {});

detect::Report audit(const Analysis& analysis, const frontend::Attributes& attrs,
                     chain::ChainState* chain);

/// Checkpoints as JSON, one entry per captured state.
std::string checkpoints_json(const Analysis& analysis);

}  // namespace dappcheck::pipeline
