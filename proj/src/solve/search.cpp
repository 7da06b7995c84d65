#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "pathfix/solve/solver.hpp"

namespace pathfix::solve {

const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

const Decl* Formula::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

void Formula::declare(const Decl& d) {
  if (!find(d.name)) decls.push_back(d);
}

void Formula::add(const Term& t) { body = conj({body, t}); }

namespace {

// Flat, slot-indexed form of a term for fast repeated evaluation.
struct CNode {
  Op op = Op::IntConst;
  Sort sort = Sort::Int;
  std::int64_t value = 0;
  int slot = -1;  // Var: first slot
  int len = 0;    // array length
  std::vector<std::int64_t> elems;
  int a = -1, b = -1, c = -1;
};

struct Slot {
  int first;
  int len;
  Sort sort;
};

class Compiled {
 public:
  explicit Compiled(const std::map<std::string, Slot>& slots) : slots_(slots) {}

  int add(const Term& t) {
    CNode n;
    n.op = t->op;
    n.sort = t->sort;
    n.value = t->value;
    switch (t->op) {
      case Op::Var: {
        auto it = slots_.find(t->name);
        if (it == slots_.end()) throw std::invalid_argument("undeclared variable " + t->name);
        if (it->second.sort != t->sort)
          throw std::invalid_argument("sort mismatch for " + t->name);
        n.slot = it->second.first;
        n.len = it->second.len;
        break;
      }
      case Op::ArrayLit:
        n.elems = t->elems;
        n.len = static_cast<int>(t->elems.size());
        break;
      default:
        break;
    }
    if (!t->args.empty()) n.a = add(t->args[0]);
    if (t->args.size() > 1) n.b = add(t->args[1]);
    if (t->args.size() > 2) n.c = add(t->args[2]);
    if (t->op == Op::Store) n.len = nodes_[n.a].len;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool truth(int n, const std::int64_t* v) const {
    const CNode& x = nodes_[n];
    switch (x.op) {
      case Op::BoolConst: return x.value != 0;
      case Op::Var: return v[x.slot] != 0;
      case Op::Not: return !truth(x.a, v);
      case Op::And: return truth(x.a, v) && truth(x.b, v);
      case Op::Or: return truth(x.a, v) || truth(x.b, v);
      case Op::Implies: return !truth(x.a, v) || truth(x.b, v);
      case Op::Ite: return truth(x.a, v) ? truth(x.b, v) : truth(x.c, v);
      default: break;
    }
    if (nodes_[x.a].sort == Sort::Bool) {
      bool p = truth(x.a, v), q = truth(x.b, v);
      return x.op == Op::Eq ? p == q : p != q;
    }
    bool undef = false;
    std::int64_t p = num(x.a, v, undef);
    if (undef) return false;
    std::int64_t q = num(x.b, v, undef);
    if (undef) return false;
    switch (x.op) {
      case Op::Eq: return p == q;
      case Op::Ne: return p != q;
      case Op::Lt: return p < q;
      case Op::Le: return p <= q;
      case Op::Gt: return p > q;
      case Op::Ge: return p >= q;
      default: throw std::logic_error("bad boolean node");
    }
  }

  // Cell `j` of array node `n`.
  std::int64_t cell(int n, std::int64_t j, const std::int64_t* v, bool& undef) const {
    const CNode& x = nodes_[n];
    if (j < 0 || j >= x.len) {
      undef = true;
      return 0;
    }
    switch (x.op) {
      case Op::Var: return v[x.slot + j];
      case Op::ArrayLit: return x.elems[j];
      case Op::Store: {
        // Every store in the chain must be defined, hit or not.
        std::int64_t below = cell(x.a, j, v, undef);
        if (undef) return 0;
        std::int64_t i = num(x.b, v, undef);
        if (undef) return 0;
        if (i < 0 || i >= x.len) {
          undef = true;
          return 0;
        }
        std::int64_t val = num(x.c, v, undef);
        return i == j ? val : below;
      }
      default: throw std::logic_error("bad array node");
    }
  }

  std::int64_t num(int n, const std::int64_t* v, bool& undef) const {
    const CNode& x = nodes_[n];
    switch (x.op) {
      case Op::IntConst: return x.value;
      case Op::Var: return v[x.slot];
      case Op::Select: {
        std::int64_t j = num(x.b, v, undef);
        if (undef) return 0;
        return cell(x.a, j, v, undef);
      }
      case Op::Neg:
        return static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(num(x.a, v, undef)));
      case Op::Ite: return truth(x.a, v) ? num(x.b, v, undef) : num(x.c, v, undef);
      default: break;
    }
    std::int64_t p = num(x.a, v, undef);
    if (undef) return 0;
    std::int64_t q = num(x.b, v, undef);
    if (undef) return 0;
    auto up = static_cast<std::uint64_t>(p), uq = static_cast<std::uint64_t>(q);
    switch (x.op) {
      case Op::Add: return static_cast<std::int64_t>(up + uq);
      case Op::Sub: return static_cast<std::int64_t>(up - uq);
      case Op::Mul: return static_cast<std::int64_t>(up * uq);
      case Op::Div:
      case Op::Mod:
        if (q == 0) {
          undef = true;
          return 0;
        }
        if (q == -1) return x.op == Op::Div ? static_cast<std::int64_t>(0ULL - up) : 0;
        return x.op == Op::Div ? p / q : p % q;
      case Op::BitAnd: return p & q;
      case Op::BitOr: return p | q;
      case Op::BitXor: return p ^ q;
      default: throw std::logic_error("bad integer node");
    }
  }

  // Slots that node `n` may read.
  void reads(int n, std::vector<int>& out) const {
    const CNode& x = nodes_[n];
    if (x.op == Op::Var) {
      int cells = x.sort == Sort::Array ? x.len : 1;
      for (int k = 0; k < cells; ++k) out.push_back(x.slot + k);
      return;
    }
    if (x.op == Op::Select && nodes_[x.b].op == Op::IntConst) {
      cell_reads(x.a, nodes_[x.b].value, out);
      return;
    }
    for (int c : {x.a, x.b, x.c})
      if (c >= 0) reads(c, out);
  }

 private:
  const std::map<std::string, Slot>& slots_;
  std::vector<CNode> nodes_;

  void cell_reads(int n, std::int64_t j, std::vector<int>& out) const {
    const CNode& x = nodes_[n];
    if (j < 0 || j >= x.len) return;
    if (x.op == Op::Var) {
      out.push_back(x.slot + static_cast<int>(j));
    } else if (x.op == Op::Store) {
      reads(x.b, out);
      reads(x.c, out);
      cell_reads(x.a, j, out);
    }
  }
};

struct Conjunct {
  int root;
  int target;  // the highest-ordered slot it reads
};

class Search {
 public:
  Search(const Compiled& code, std::vector<std::int64_t>& vals, std::vector<int> order,
         std::vector<std::vector<std::int64_t>> domains, std::uint64_t& nodes,
         std::uint64_t budget)
      : code_(code), vals_(vals), order_(std::move(order)), dom_(std::move(domains)),
        nodes_(nodes), budget_(budget) {
    alive_.resize(dom_.size());
    count_.resize(dom_.size());
    for (std::size_t k = 0; k < dom_.size(); ++k) {
      alive_[k].assign(dom_[k].size(), 1);
      count_[k] = static_cast<int>(dom_[k].size());
    }
    filters_.resize(order_.size() + 1);
  }

  // `level` is the position in `order_` after which the conjunct can filter
  // its target; -1 means before any assignment.
  void add_filter(int level, Conjunct c) { filters_[level + 1].push_back(c); }

  Status run() {
    if (!apply(-1)) return Status::Unsat;
    return dfs(0);
  }

 private:
  const Compiled& code_;
  std::vector<std::int64_t>& vals_;
  std::vector<int> order_;  // slots in search order
  std::vector<std::vector<std::int64_t>> dom_;  // by position in order_
  std::vector<std::vector<char>> alive_;
  std::vector<int> count_;
  std::vector<std::vector<Conjunct>> filters_;
  std::vector<std::pair<int, int>> trail_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  std::map<int, int> pos_of_;

  int pos(int slot) {
    if (pos_of_.empty())
      for (std::size_t k = 0; k < order_.size(); ++k) pos_of_[order_[k]] = static_cast<int>(k);
    return pos_of_.at(slot);
  }

  bool apply(int level) {
    for (const auto& c : filters_[level + 1]) {
      int p = pos(c.target);
      for (std::size_t k = 0; k < dom_[p].size(); ++k) {
        if (!alive_[p][k]) continue;
        vals_[c.target] = dom_[p][k];
        if (!code_.truth(c.root, vals_.data())) {
          alive_[p][k] = 0;
          --count_[p];
          trail_.emplace_back(p, static_cast<int>(k));
        }
      }
      if (count_[p] == 0) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [p, k] = trail_.back();
      trail_.pop_back();
      alive_[p][k] = 1;
      ++count_[p];
    }
  }

  Status dfs(std::size_t level) {
    if (level == order_.size()) return Status::Sat;
    int slot = order_[level];
    for (std::size_t k = 0; k < dom_[level].size(); ++k) {
      if (!alive_[level][k]) continue;
      if (++nodes_ > budget_) return Status::Unknown;
      vals_[slot] = dom_[level][k];
      std::size_t mark = trail_.size();
      if (apply(static_cast<int>(level))) {
        Status s = dfs(level + 1);
        if (s != Status::Unsat) return s;
      }
      undo(mark);
    }
    return Status::Unsat;
  }
};

std::vector<std::int64_t> int_domain(int bound) {
  std::vector<std::int64_t> d{0};
  for (int k = 1; k <= bound; ++k) {
    d.push_back(k);
    d.push_back(-k);
  }
  return d;
}

}  // namespace

SatResult check_sat(const Formula& f, const SolverConfig& cfg) {
  if (cfg.int_bound < 1) throw std::invalid_argument("int_bound must be at least 1");
  std::map<std::string, Slot> slots;
  std::vector<Sort> slot_sort;
  for (const auto& d : f.decls) {
    if (slots.count(d.name)) throw std::invalid_argument("duplicate declaration " + d.name);
    int len = d.sort == Sort::Array ? d.length : 1;
    if (d.sort == Sort::Array && (len < 0 || len > 64))
      throw std::invalid_argument("unsupported array length for " + d.name);
    slots[d.name] = {static_cast<int>(slot_sort.size()), len, d.sort};
    for (int k = 0; k < len; ++k)
      slot_sort.push_back(d.sort == Sort::Bool ? Sort::Bool : Sort::Int);
  }
  int n = static_cast<int>(slot_sort.size());

  Compiled code(slots);
  std::vector<int> roots;
  std::vector<std::vector<int>> reads;
  for (const auto& c : conjuncts(f.body)) {
    if (c->sort != Sort::Bool) throw std::invalid_argument("formula body is not boolean");
    roots.push_back(code.add(c));
    std::vector<int> r;
    code.reads(roots.back(), r);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    reads.push_back(std::move(r));
  }

  SatResult result;
  std::vector<std::int64_t> vals(n, 0);

  // Variable-free conjuncts.
  for (std::size_t c = 0; c < roots.size(); ++c) {
    if (reads[c].empty() && !code.truth(roots[c], vals.data())) {
      result.status = Status::Unsat;
      return result;
    }
  }

  // Independent components by union-find over shared slots.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root_of = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& r : reads)
    for (std::size_t k = 1; k < r.size(); ++k) parent[root_of(r[k])] = root_of(r[0]);

  std::map<int, std::vector<int>> comp_slots;
  std::vector<char> used(n, 0);
  for (const auto& r : reads)
    for (int s : r) used[s] = 1;
  for (int s = 0; s < n; ++s)
    if (used[s]) comp_slots[root_of(s)].push_back(s);

  auto domain = int_domain(cfg.int_bound);
  // Components are solved in order of their first slot.
  std::vector<std::pair<int, std::vector<int>>> comps(comp_slots.begin(), comp_slots.end());
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.second.front() < b.second.front(); });

  for (const auto& [rep, order] : comps) {
    std::vector<std::vector<std::int64_t>> doms;
    for (int s : order)
      doms.push_back(slot_sort[s] == Sort::Bool ? std::vector<std::int64_t>{0, 1} : domain);
    Search search(code, vals, order, std::move(doms), result.nodes, cfg.node_budget);
    std::map<int, int> pos;
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
    for (std::size_t c = 0; c < roots.size(); ++c) {
      const auto& r = reads[c];
      if (r.empty() || root_of(r.front()) != rep) continue;
      int target = r.back();
      int level = r.size() >= 2 ? pos[r[r.size() - 2]] : -1;
      search.add_filter(level, {roots[c], target});
    }
    Status s = search.run();
    if (s != Status::Sat) {
      result.status = s;
      if (s == Status::Unknown && !cfg.external.empty()) {
        result.status = run_external(cfg.external, to_smtlib(f, cfg.int_bound));
        result.model.clear();
      }
      return result;
    }
  }

  result.status = Status::Sat;
  for (const auto& d : f.decls) {
    const Slot& s = slots.at(d.name);
    if (d.sort == Sort::Array) {
      result.model[d.name] = lang::Value::of_array(
          std::vector<std::int64_t>(vals.begin() + s.first, vals.begin() + s.first + s.len));
    } else if (d.sort == Sort::Bool) {
      result.model[d.name] = lang::Value::of_bool(vals[s.first] != 0);
    } else {
      result.model[d.name] = lang::Value::of_int(vals[s.first]);
    }
  }
  return result;
}

}  // namespace pathfix::solve
