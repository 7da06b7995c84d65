#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pathfix/solve/solver.hpp"

namespace pathfix::solve {
namespace {

std::string symbol(const std::string& name) {
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name)
    simple = simple && (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.');
  return simple ? name : "|" + name + "|";
}

std::string cell_symbol(const std::string& name, int k) {
  return symbol(name + "@" + std::to_string(k));
}

std::string num(std::int64_t v) {
  return "(_ bv" + std::to_string(static_cast<std::uint64_t>(v)) + " 64)";
}

// Conjunction of definedness conditions; empty means always defined.
std::string both(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return "(and " + a + " " + b + ")";
}

struct IntEnc {
  std::string value;
  std::string defined;
};

struct CellEnc {
  std::vector<IntEnc> cells;
};

class Encoder {
 public:
  explicit Encoder(const Formula& f) : f_(f) {}

  std::string boolean(const Term& t) {
    const auto& a = t->args;
    switch (t->op) {
      case Op::BoolConst: return t->value ? "true" : "false";
      case Op::Var: return symbol(t->name);
      case Op::Not: return "(not " + boolean(a[0]) + ")";
      case Op::And: return "(and " + boolean(a[0]) + " " + boolean(a[1]) + ")";
      case Op::Or: return "(or " + boolean(a[0]) + " " + boolean(a[1]) + ")";
      case Op::Implies: return "(=> " + boolean(a[0]) + " " + boolean(a[1]) + ")";
      case Op::Ite:
        return "(ite " + boolean(a[0]) + " " + boolean(a[1]) + " " + boolean(a[2]) + ")";
      default: break;
    }
    if (a[0]->sort == Sort::Bool) {
      std::string e = "(= " + boolean(a[0]) + " " + boolean(a[1]) + ")";
      return t->op == Op::Eq ? e : "(not " + e + ")";
    }
    IntEnc x = integer(a[0]), y = integer(a[1]);
    std::string atom;
    switch (t->op) {
      case Op::Eq: atom = "(= " + x.value + " " + y.value + ")"; break;
      case Op::Ne: atom = "(not (= " + x.value + " " + y.value + "))"; break;
      case Op::Lt: atom = "(bvslt " + x.value + " " + y.value + ")"; break;
      case Op::Le: atom = "(bvsle " + x.value + " " + y.value + ")"; break;
      case Op::Gt: atom = "(bvsgt " + x.value + " " + y.value + ")"; break;
      default: atom = "(bvsge " + x.value + " " + y.value + ")"; break;
    }
    return both(both(x.defined, y.defined), atom);
  }

  IntEnc integer(const Term& t) {
    const auto& a = t->args;
    switch (t->op) {
      case Op::IntConst: return {num(t->value), ""};
      case Op::Var: return {symbol(t->name), ""};
      case Op::Neg: {
        IntEnc x = integer(a[0]);
        return {"(bvneg " + x.value + ")", x.defined};
      }
      case Op::Ite: {
        IntEnc x = integer(a[1]), y = integer(a[2]);
        std::string c = boolean(a[0]);
        std::string d;
        if (!x.defined.empty() || !y.defined.empty())
          d = "(ite " + c + " " + (x.defined.empty() ? "true" : x.defined) + " " +
              (y.defined.empty() ? "true" : y.defined) + ")";
        return {"(ite " + c + " " + x.value + " " + y.value + ")", d};
      }
      case Op::Select: {
        CellEnc arr = cells(a[0]);
        IntEnc idx = integer(a[1]);
        int n = static_cast<int>(arr.cells.size());
        if (n == 0) return {"0", "false"};
        std::string value = arr.cells[n - 1].value;
        std::string def = arr.cells[n - 1].defined.empty() ? "true" : arr.cells[n - 1].defined;
        bool any_def = !arr.cells[n - 1].defined.empty();
        for (int k = n - 2; k >= 0; --k) {
          std::string test = "(= " + idx.value + " " + num(k) + ")";
          value = "(ite " + test + " " + arr.cells[k].value + " " + value + ")";
          any_def = any_def || !arr.cells[k].defined.empty();
          def = "(ite " + test + " " + (arr.cells[k].defined.empty() ? "true" : arr.cells[k].defined) +
                " " + def + ")";
        }
        std::string range = "(and (bvsle " + num(0) + " " + idx.value + ") (bvslt " +
                            idx.value + " " + num(n) + "))";
        return {value, both(both(idx.defined, range), any_def ? def : "")};
      }
      default: break;
    }
    IntEnc x = integer(a[0]), y = integer(a[1]);
    std::string d = both(x.defined, y.defined);
    const std::string& p = x.value;
    const std::string& q = y.value;
    switch (t->op) {
      case Op::Add: return {"(bvadd " + p + " " + q + ")", d};
      case Op::Sub: return {"(bvsub " + p + " " + q + ")", d};
      case Op::Mul: return {"(bvmul " + p + " " + q + ")", d};
      case Op::Div: return {"(bvsdiv " + p + " " + q + ")", both(d, "(not (= " + q + " " + num(0) + "))")};
      case Op::Mod: return {"(bvsrem " + p + " " + q + ")", both(d, "(not (= " + q + " " + num(0) + "))")};
      case Op::BitAnd: return {"(bvand " + p + " " + q + ")", d};
      case Op::BitOr: return {"(bvor " + p + " " + q + ")", d};
      default: return {"(bvxor " + p + " " + q + ")", d};
    }
  }

  CellEnc cells(const Term& t) {
    CellEnc out;
    switch (t->op) {
      case Op::ArrayLit:
        for (auto v : t->elems) out.cells.push_back({num(v), ""});
        return out;
      case Op::Var: {
        const Decl* d = f_.find(t->name);
        if (!d) throw std::invalid_argument("undeclared array " + t->name);
        for (int k = 0; k < d->length; ++k) out.cells.push_back({cell_symbol(t->name, k), ""});
        return out;
      }
      case Op::Store: {
        CellEnc base = cells(t->args[0]);
        IntEnc i = integer(t->args[1]);
        IntEnc v = integer(t->args[2]);
        int n = static_cast<int>(base.cells.size());
        std::string guard = both(i.defined, "(and (bvsle " + num(0) + " " + i.value +
                                                ") (bvslt " + i.value + " " + num(n) + "))");
        for (int k = 0; k < n; ++k) {
          std::string hit = "(= " + i.value + " " + num(k) + ")";
          out.cells.push_back({"(ite " + hit + " " + v.value + " " + base.cells[k].value + ")",
                               both(both(guard, v.defined), base.cells[k].defined)});
        }
        return out;
      }
      default:
        throw std::invalid_argument("unsupported array term");
    }
  }

 private:
  const Formula& f_;
};

}  // namespace

std::string to_smtlib(const Formula& f, std::optional<int> bound) {
  std::ostringstream os;
  os << "(set-logic QF_BV)\n";
  std::vector<std::string> ints;
  for (const auto& d : f.decls) {
    if (d.sort == Sort::Bool) {
      os << "(declare-const " << symbol(d.name) << " Bool)\n";
    } else if (d.sort == Sort::Int) {
      os << "(declare-const " << symbol(d.name) << " (_ BitVec 64))\n";
      ints.push_back(symbol(d.name));
    } else {
      for (int k = 0; k < d.length; ++k) {
        os << "(declare-const " << cell_symbol(d.name, k) << " (_ BitVec 64))\n";
        ints.push_back(cell_symbol(d.name, k));
      }
    }
  }
  if (bound) {
    for (const auto& v : ints)
      os << "(assert (and (bvsle " << num(-*bound) << " " << v << ") (bvsle " << v << " "
         << num(*bound) << ")))\n";
  }
  Encoder enc(f);
  for (const auto& c : conjuncts(f.body)) os << "(assert " << enc.boolean(c) << ")\n";
  os << "(check-sat)\n";
  return os.str();
}

Status run_external(const std::string& command, const std::string& smtlib) {
  char path[] = "/tmp/pathfix-smt-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) return Status::Unknown;
  close(fd);
  {
    std::ofstream out(path);
    out << smtlib;
  }
  std::string cmd = "timeout 30 " + command + " < " + path + " 2>/dev/null";
  Status result = Status::Unknown;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    char buf[256];
    if (std::fgets(buf, sizeof buf, pipe)) {
      std::string line(buf);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (line == "sat") result = Status::Sat;
      if (line == "unsat") result = Status::Unsat;
    }
    pclose(pipe);
  }
  std::remove(path);
  return result;
}

}  // namespace pathfix::solve
