#include "pathfix/equiv/equiv.hpp"

#include "json.hpp"
#include <set>

namespace pathfix::equiv {

using solve::Term;

Theta Theta::of(const lang::ExecResult& r) {
  Theta t;
  switch (r.outcome) {
    case lang::Outcome::Returned:
      t.kind = Kind::Value;
      t.value = r.value;
      break;
    case lang::Outcome::RuntimeError:
      t.kind = Kind::Error;
      t.error = r.error;
      break;
    case lang::Outcome::FuelExhausted:
      t.kind = Kind::Bound;
      break;
  }
  return t;
}

std::string Theta::str() const {
  switch (kind) {
    case Kind::Value: return value.str();
    case Kind::Error: return lang::to_string(error);
    case Kind::Bound: return "BoundExhausted";
  }
  return "?";
}

bool Theta::operator==(const Theta& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Value) return value == o.value;
  if (kind == Kind::Error) return error == o.error;
  return true;
}

std::size_t EquivResult::fault_count() const {
  std::size_t n = 0;
  for (const auto& t : triplets) n += t.fault;
  return n;
}

lang::ExecResult run_bounded(const lang::Program& prog, const std::vector<lang::Value>& inputs,
                             const sym::SymOptions& opts) {
  lang::InterpOptions io;
  io.loop_bound = opts.loop_trips;
  io.call_bound = opts.call_depth;
  return lang::interpret(prog, inputs, opts.step_fuel, io);
}

namespace {

void check_signatures(const lang::Function& t, const lang::Function& r) {
  bool same = t.params.size() == r.params.size() && t.ret_type == r.ret_type;
  for (std::size_t k = 0; same && k < t.params.size(); ++k)
    same = t.params[k].type == r.params[k].type;
  if (!same)
    throw EquivError(EquivError::Kind::SignatureMismatch,
                     "entry signatures of " + t.name + " and " + r.name + " differ");
}

/// Term that is true where the two symbolic outcomes could be observed to
/// differ; null when they always differ.
Term divergence(const sym::SymPath& t, const sym::SymPath& r) {
  if (t.outcome != r.outcome) return nullptr;
  switch (t.outcome) {
    case sym::Outcome::Returned:
      if (!t.value || !r.value) return solve::bool_const(false);
      return solve::simplify_term(solve::binary(solve::Op::Ne, t.value, r.value));
    case sym::Outcome::RuntimeError:
      return solve::bool_const(t.error != r.error);
    case sym::Outcome::BoundExhausted:
      return solve::bool_const(false);
  }
  return nullptr;
}

}  // namespace

EquivResult check_equivalence(const lang::Program& target, const lang::Program& reference,
                              const lang::ExprPtr& pre, const EquivOptions& opts) {
  const lang::Function& tf = target.entry_function();
  check_signatures(tf, reference.entry_function());
  EquivResult out;
  out.env = sym::make_env(tf, pre, opts.sym);
  if (opts.region) out.env.pre = solve::conj({out.env.pre, opts.region});
  sym::SymResult tr = sym::sym_execute_in(target, out.env, opts.sym);
  sym::SymResult rr = sym::sym_execute_in(reference, out.env, opts.sym);
  out.truncated = tr.truncated || rr.truncated;
  if (out.truncated) out.warnings.push_back("path enumeration truncated at max_paths");

  for (std::size_t i = 0; i < tr.paths.size(); ++i) {
    const sym::SymPath& tp = tr.paths[i];
    for (std::size_t j = 0; j < rr.paths.size(); ++j) {
      const sym::SymPath& rp = rr.paths[j];
      Term region = solve::simplify_term(solve::conj({tp.input_condition, rp.input_condition}));
      solve::SatResult base = solve::check_sat(out.env.formula({region}, nullptr), out.env.solver);
      if (base.status == solve::Status::Unsat) continue;
      if (base.status == solve::Status::Unknown) {
        out.warnings.push_back("region of target path " + std::to_string(i + 1) +
                               " x reference path " + std::to_string(j + 1) +
                               " undecided within the solver budget");
        continue;
      }
      PathTriplet t;
      t.input_condition = region;
      t.target_path = static_cast<int>(i);
      t.reference_path = static_cast<int>(j);
      t.target_trace = tp.trace;
      if (tp.outcome == sym::Outcome::Returned) t.target_exit = tp.exit_loc;
      t.witness = base.model;
      Term d = divergence(tp, rp);
      if (d && !solve::is_false(d) && !solve::is_true(d)) {
        solve::SatResult w = solve::check_sat(out.env.formula({region}, d), out.env.solver);
        if (w.status == solve::Status::Sat) t.witness = w.model;
      }
      t.witness_inputs = sym::inputs_from_model(out.env, t.witness);
      t.theta_tgt = Theta::of(run_bounded(target, t.witness_inputs, opts.sym));
      t.theta_ref = Theta::of(run_bounded(reference, t.witness_inputs, opts.sym));
      bool both_bound = t.theta_tgt.kind == Theta::Kind::Bound && t.theta_ref.kind == Theta::Kind::Bound;
      t.fault = !both_bound && t.theta_tgt != t.theta_ref;
      if (both_bound) t.warning = "both programs exhaust the bounds";
      out.triplets.push_back(std::move(t));
    }
  }
  for (std::size_t k = 0; k < out.triplets.size(); ++k)
    out.triplets[k].id = "P" + std::to_string(k + 1);
  return out;
}

EquivResult faults_from_tests(const lang::Program& target, const std::vector<TestCase>& tests,
                              const lang::ExprPtr& pre, const EquivOptions& opts) {
  const lang::Function& fn = target.entry_function();
  EquivResult out;
  std::set<std::string> seen;
  for (const TestCase& tc : tests) {
    if (tc.inputs.size() != fn.params.size())
      throw EquivError(EquivError::Kind::BadTests, "test arity does not match " + fn.name);
    Theta got = Theta::of(run_bounded(target, tc.inputs, opts.sym));
    if (got == tc.expected) continue;

    sym::SymEnv env;
    if (pre) {
      env = sym::make_env(fn, pre, opts.sym);
    } else {
      env.solver = opts.sym.solver;
      for (std::size_t k = 0; k < fn.params.size(); ++k) {
        solve::Decl d{fn.params[k].name, solve::Sort::Int, 0};
        if (fn.params[k].type == lang::Type::Bool) d.sort = solve::Sort::Bool;
        if (fn.params[k].type == lang::Type::IntArray) {
          d.sort = solve::Sort::Array;
          d.length = static_cast<int>(tc.inputs[k].arr.size());
        }
        env.inputs.push_back(d);
      }
    }
    sym::SymOptions guided = opts.sym;
    guided.guide = sym::model_from_inputs(env, tc.inputs);
    sym::SymResult r = sym::sym_execute_in(target, env, guided);
    if (r.paths.empty()) continue;
    const sym::SymPath& p = r.paths.front();
    std::string key = solve::to_string(p.input_condition);
    if (!seen.insert(key).second) continue;

    PathTriplet t;
    t.input_condition = p.input_condition;
    t.theta_ref = tc.expected;
    t.theta_tgt = got;
    t.fault = true;
    t.witness = *guided.guide;
    t.witness_inputs = tc.inputs;
    t.target_trace = p.trace;
    if (p.outcome == sym::Outcome::Returned) t.target_exit = p.exit_loc;
    if (out.env.inputs.empty()) out.env = env;
    out.triplets.push_back(std::move(t));
  }
  for (std::size_t k = 0; k < out.triplets.size(); ++k)
    out.triplets[k].id = "P" + std::to_string(k + 1);
  return out;
}

namespace {

lang::Value value_from_json(const nlohmann::json& j, lang::Type t) {
  switch (t) {
    case lang::Type::Int:
      if (!j.is_number_integer()) break;
      return lang::Value::of_int(j.get<std::int64_t>());
    case lang::Type::Bool:
      if (!j.is_boolean()) break;
      return lang::Value::of_bool(j.get<bool>());
    case lang::Type::IntArray:
      if (!j.is_array()) break;
      return lang::Value::of_array(j.get<std::vector<std::int64_t>>());
    case lang::Type::Void:
      if (!j.is_null()) break;
      return lang::Value::void_value();
  }
  throw EquivError(EquivError::Kind::BadTests, "value " + j.dump() + " is not " + lang::to_string(t));
}

nlohmann::json value_to_json(const lang::Value& v) {
  switch (v.type) {
    case lang::Type::Int: return v.i;
    case lang::Type::Bool: return v.i != 0;
    case lang::Type::IntArray: return v.arr;
    case lang::Type::Void: return nullptr;
  }
  return nullptr;
}

}  // namespace

std::vector<TestCase> parse_tests(const std::string& text, const lang::Function& fn) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw EquivError(EquivError::Kind::BadTests, e.what());
  }
  if (!j.is_array()) throw EquivError(EquivError::Kind::BadTests, "tests must be a JSON array");
  std::vector<TestCase> out;
  for (const auto& item : j) {
    if (!item.contains("inputs") || !item["inputs"].is_array() || !item.contains("expected"))
      throw EquivError(EquivError::Kind::BadTests, "each test needs inputs and expected");
    const auto& in = item["inputs"];
    if (in.size() != fn.params.size())
      throw EquivError(EquivError::Kind::BadTests, "test arity does not match " + fn.name);
    TestCase tc;
    for (std::size_t k = 0; k < in.size(); ++k) tc.inputs.push_back(value_from_json(in[k], fn.params[k].type));
    const auto& e = item["expected"];
    if (e.is_string()) {
      std::string s = e.get<std::string>();
      if (s == "BoundExhausted") {
        tc.expected.kind = Theta::Kind::Bound;
      } else {
        tc.expected.kind = Theta::Kind::Error;
        bool found = false;
        for (auto k : {lang::RuntimeErrorKind::DivByZero, lang::RuntimeErrorKind::IndexOutOfBounds,
                       lang::RuntimeErrorKind::MissingReturn, lang::RuntimeErrorKind::StackOverflow})
          if (s == lang::to_string(k)) {
            tc.expected.error = k;
            found = true;
          }
        if (!found) throw EquivError(EquivError::Kind::BadTests, "unknown outcome " + s);
      }
    } else {
      tc.expected.value = value_from_json(e, fn.ret_type);
    }
    out.push_back(std::move(tc));
  }
  return out;
}

std::string tests_to_json(const std::vector<TestCase>& tests) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& tc : tests) {
    nlohmann::json item;
    item["inputs"] = nlohmann::json::array();
    for (const auto& v : tc.inputs) item["inputs"].push_back(value_to_json(v));
    if (tc.expected.kind == Theta::Kind::Value) item["expected"] = value_to_json(tc.expected.value);
    else item["expected"] = tc.expected.str();
    j.push_back(item);
  }
  return j.dump();
}

}  // namespace pathfix::equiv
