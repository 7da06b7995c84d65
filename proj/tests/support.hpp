#pragma once

#include <string>

#include "pathfix/lang/ast.hpp"

namespace pathfix::testing {

std::string source_path(const std::string& rel);
std::string read_text(const std::string& rel);
lang::Program load_program(const std::string& rel);

}  // namespace pathfix::testing

#include <vector>

#include "json.hpp"
#include "pathfix/lang/interpreter.hpp"

namespace pathfix::testing {

struct CorpusCase {
  std::string id;
  nlohmann::json meta;
  lang::Program buggy;
  lang::Program reference;
  lang::ExprPtr pre;
  lang::Location fault;
};

std::vector<std::string> corpus_ids();
CorpusCase load_case(const std::string& id);

/// Every input inside the case's meta domain that satisfies its pre-condition.
/// Arrays have length 3.
std::vector<std::vector<lang::Value>> bounded_inputs(const CorpusCase& c);

/// Buggy program with the meta ground-truth fix applied.
lang::Program ground_truth(const CorpusCase& c);

/// Inputs on which the two programs' outcomes differ.
std::size_t disagreements(const lang::Program& a, const lang::Program& b,
                          const std::vector<std::vector<lang::Value>>& inputs);

}  // namespace pathfix::testing
