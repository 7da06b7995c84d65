#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <functional>

#include "pathfix/driver/driver.hpp"
#include "pathfix/lang/parser.hpp"
#include "pathfix/lang/patch.hpp"

namespace pathfix::testing {

std::string source_path(const std::string& rel) {
  return std::string(PATHFIX_SOURCE_DIR) + "/" + rel;
}

std::string read_text(const std::string& rel) {
  std::ifstream in(source_path(rel));
  if (!in) throw std::runtime_error("cannot open " + rel);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

lang::Program load_program(const std::string& rel) {
  return lang::parse_program(read_text(rel));
}

std::vector<std::string> corpus_ids() {
  std::vector<std::string> ids;
  for (const auto& e : std::filesystem::directory_iterator(source_path("corpus")))
    if (e.is_directory()) ids.push_back(e.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

CorpusCase load_case(const std::string& id) {
  CorpusCase c;
  std::string dir = "corpus/" + id + "/";
  c.id = id;
  c.meta = nlohmann::json::parse(read_text(dir + "meta.json"));
  c.buggy = load_program(dir + "buggy.mc");
  c.reference = load_program(dir + "reference.mc");
  std::map<std::string, lang::Type> scope;
  for (const auto& p : c.buggy.entry_function().params) scope[p.name] = p.type;
  std::string pre = read_text(dir + "pre.txt");
  c.pre = lang::parse_expression(pre, scope);
  c.fault = driver::resolve_location(c.buggy, c.meta["fault"].get<std::string>());
  return c;
}

std::vector<std::vector<lang::Value>> bounded_inputs(const CorpusCase& c) {
  auto range = [&](const char* key) {
    auto r = c.meta["domain"].value(key, nlohmann::json::array({0, 0}));
    return std::make_pair(r[0].get<std::int64_t>(), r[1].get<std::int64_t>());
  };
  auto ints = range("int");
  auto cells = range("cell");
  const auto& params = c.buggy.entry_function().params;
  std::vector<std::vector<lang::Value>> out;
  std::vector<lang::Value> cur;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == params.size()) {
      std::map<std::string, lang::Value> env;
      for (std::size_t k = 0; k < params.size(); ++k) env[params[k].name] = cur[k];
      auto ok = lang::eval_pure(c.pre, env);
      if (ok && ok->i) out.push_back(cur);
      return;
    }
    switch (params[i].type) {
      case lang::Type::IntArray:
        for (auto x = cells.first; x <= cells.second; ++x)
          for (auto y = cells.first; y <= cells.second; ++y)
            for (auto z = cells.first; z <= cells.second; ++z) {
              cur.push_back(lang::Value::of_array({x, y, z}));
              go(i + 1);
              cur.pop_back();
            }
        break;
      case lang::Type::Bool:
        for (bool b : {false, true}) {
          cur.push_back(lang::Value::of_bool(b));
          go(i + 1);
          cur.pop_back();
        }
        break;
      default:
        for (auto x = ints.first; x <= ints.second; ++x) {
          cur.push_back(lang::Value::of_int(x));
          go(i + 1);
          cur.pop_back();
        }
    }
  };
  go(0);
  return out;
}

lang::Program ground_truth(const CorpusCase& c) {
  const lang::Function* fn = c.buggy.find(c.fault.function);
  std::map<std::string, lang::Type> scope;
  for (const auto& p : lang::scope_at(*fn, c.fault)) scope[p.name] = p.type;
  auto fix = lang::parse_expression(c.meta["ground_truth"].get<std::string>(), scope);
  if (c.meta.contains("guard_value"))
    return lang::insert_guard(c.buggy, c.fault, fix,
                              lang::Expr::int_lit(c.meta["guard_value"].get<std::int64_t>()));
  return lang::apply_patch(c.buggy, c.fault, fix);
}

std::size_t disagreements(const lang::Program& a, const lang::Program& b,
                          const std::vector<std::vector<lang::Value>>& inputs) {
  std::size_t n = 0;
  for (const auto& in : inputs)
    if (!lang::interpret(a, in, 100000).same_outcome(lang::interpret(b, in, 100000))) ++n;
  return n;
}

}  // namespace pathfix::testing
