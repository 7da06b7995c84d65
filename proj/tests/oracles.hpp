#pragma once

#include <optional>
#include <random>

#include "pathfix/solve/solver.hpp"

namespace pathfix::testing {

/// Evaluator written separately from the solver's: undefined integer
/// subterms are nullopt and make the enclosing comparison false.
std::optional<std::int64_t> oracle_int(const solve::Term& t, const solve::Model& m);
bool oracle_bool(const solve::Term& t, const solve::Model& m);

struct BruteResult {
  bool sat = false;
  solve::Model first;  // first model in search order
  std::uint64_t tried = 0;
};

/// Enumerates every assignment in [-B, B], first variable slowest, values in
/// the order 0, 1, -1, 2, -2, ...
BruteResult brute_force(const solve::Formula& f, int bound);

/// Random formula over at most `nvars` int/bool variables.
solve::Formula random_formula(std::mt19937& rng, int nvars, int depth);

}  // namespace pathfix::testing
