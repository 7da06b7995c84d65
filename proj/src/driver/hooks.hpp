#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathfix/oracle/oracle.hpp"
#include "pathfix/specinfer/specinfer.hpp"

namespace pathfix::driver {

struct Hints {
  std::set<std::string> prune;
  std::vector<std::string> invariants;
  std::vector<lang::ExprPtr> suggestions;
  nlohmann::json log = nlohmann::json::array();

  bool any() const { return !prune.empty() || !invariants.empty() || !suggestions.empty(); }
};

/// Consults the oracle at its three hook points. Every payload is only
/// parsed here; the pipeline re-validates whatever it uses.
Hints gather_hints(const oracle::OracleConfig& cfg, const std::string& case_id,
                   const std::string& source, const lang::Program& prog,
                   const lang::Location& fault, const std::vector<specinfer::FaultSpec>& specs);

}  // namespace pathfix::driver
