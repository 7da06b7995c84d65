#pragma once

#include "json.hpp"
#include "pathfix/driver/driver.hpp"
#include "pathfix/equiv/equiv.hpp"
#include "pathfix/specinfer/specinfer.hpp"
#include "pathfix/synth/synth.hpp"
#include "pathfix/verify/verify.hpp"

namespace pathfix::driver {

nlohmann::json to_json(const lang::Value& v);
nlohmann::json to_json(const std::vector<lang::Value>& vs);
nlohmann::json to_json(const equiv::TestCase& t);
nlohmann::json to_json(const equiv::PathTriplet& t);
/// Candidate-path rows; retained constraints are appended to `constraints`.
nlohmann::json to_json(const specinfer::FaultSpec& s, const cfg::Cfg& g, const sym::SymEnv& env,
                       nlohmann::json& constraints);
nlohmann::json to_json(const verify::VerificationReport& r);
nlohmann::json to_json(const synth::ComponentPool& p);
nlohmann::json to_json(const synth::CegisResult& r);
nlohmann::json to_json(const synth::Patch& p, const lang::Program& before);

}  // namespace pathfix::driver
