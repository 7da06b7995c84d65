#include "pathfix/cfg/cfg.hpp"

#include <algorithm>
#include <sstream>

#include "pathfix/lang/printer.hpp"

namespace pathfix::cfg {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Entry: return "Entry";
    case NodeKind::Exit: return "Exit";
    case NodeKind::Stmt: return "Stmt";
    case NodeKind::Branch: return "Branch";
    case NodeKind::LoopHead: return "LoopHead";
  }
  return "?";
}

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Fallthrough: return "Fallthrough";
    case EdgeKind::True: return "True";
    case EdgeKind::False: return "False";
    case EdgeKind::Back: return "Back";
  }
  return "?";
}

std::string Node::label() const {
  switch (kind) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Exit:
      if (implicit) return "exit";
      return stmt && stmt->expr ? "return " + lang::to_source(stmt->expr) : "return";
    case NodeKind::Branch: return "if (" + lang::to_source(stmt->expr) + ")";
    case NodeKind::LoopHead: return "while (" + lang::to_source(stmt->expr) + ")";
    case NodeKind::Stmt: {
      std::string s = lang::to_source(*stmt);
      while (!s.empty() && (s.back() == '\n' || s.back() == ';')) s.pop_back();
      return s;
    }
  }
  return "?";
}

std::vector<int> Cfg::exits() const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.kind == NodeKind::Exit) out.push_back(n.id);
  return out;
}

std::vector<int> Cfg::out_edges(int node) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].from == node) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Cfg::in_edges(int node) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].to == node) out.push_back(static_cast<int>(i));
  return out;
}

int Cfg::find(const lang::Location& loc) const {
  for (const auto& n : nodes)
    if (n.stmt && n.loc == loc) return n.id;
  return -1;
}

std::optional<bool> Cfg::polarity(int edge) const {
  const Edge& e = edges[edge];
  if (e.kind == EdgeKind::True) return true;
  if (e.kind == EdgeKind::False) return false;
  return e.polarity;
}

namespace {

struct Pending {
  int from;
  EdgeKind kind;
};

struct LoopCtx {
  int head;
  std::vector<Pending> breaks;
  std::vector<Pending> continues;
};

class Builder {
 public:
  Cfg cfg;

  explicit Builder(const lang::Function& fn) { cfg.function = fn.name; }

  int add_node(NodeKind k, const lang::StmtPtr& s) {
    Node n;
    n.id = static_cast<int>(cfg.nodes.size());
    n.kind = k;
    n.stmt = s;
    if (s) n.loc = s->loc;
    for (const auto& l : loops_) n.loops.push_back(l.head);
    cfg.nodes.push_back(std::move(n));
    return cfg.nodes.back().id;
  }

  void connect(const std::vector<Pending>& pending, int to) {
    for (const auto& p : pending) {
      Edge e{p.from, to, p.kind, std::nullopt};
      const auto& from_loops = cfg.nodes[p.from].loops;
      if (cfg.nodes[to].kind == NodeKind::LoopHead &&
          std::find(from_loops.begin(), from_loops.end(), to) != from_loops.end()) {
        if (p.kind == EdgeKind::True) e.polarity = true;
        if (p.kind == EdgeKind::False) e.polarity = false;
        e.kind = EdgeKind::Back;
      }
      cfg.edges.push_back(e);
    }
  }

  std::vector<Pending> block(const lang::Block& b, std::vector<Pending> pending) {
    for (const auto& s : b) {
      if (pending.empty()) break;  // unreachable remainder
      pending = stmt(s, std::move(pending));
    }
    return pending;
  }

  std::vector<Pending> stmt(const lang::StmtPtr& s, std::vector<Pending> pending) {
    using lang::StmtKind;
    switch (s->kind) {
      case StmtKind::Decl:
      case StmtKind::Assign:
      case StmtKind::ExprStmt: {
        int n = add_node(NodeKind::Stmt, s);
        connect(pending, n);
        return {{n, EdgeKind::Fallthrough}};
      }
      case StmtKind::Return: {
        int n = add_node(NodeKind::Exit, s);
        connect(pending, n);
        return {};
      }
      case StmtKind::Break:
      case StmtKind::Continue: {
        int n = add_node(NodeKind::Stmt, s);
        connect(pending, n);
        auto& ctx = loops_.back();
        (s->kind == StmtKind::Break ? ctx.breaks : ctx.continues)
            .push_back({n, EdgeKind::Fallthrough});
        return {};
      }
      case StmtKind::If: {
        int n = add_node(NodeKind::Branch, s);
        connect(pending, n);
        auto out = block(s->body, {{n, EdgeKind::True}});
        auto other = block(s->alt, {{n, EdgeKind::False}});
        out.insert(out.end(), other.begin(), other.end());
        return out;
      }
      case StmtKind::While: {
        loops_.push_back({-1, {}, {}});
        int head = add_node(NodeKind::LoopHead, s);
        loops_.back().head = head;
        cfg.nodes[head].loops.push_back(head);
        connect(pending, head);
        auto body_out = block(s->body, {{head, EdgeKind::True}});
        auto conts = loops_.back().continues;
        body_out.insert(body_out.end(), conts.begin(), conts.end());
        auto step_out = s->alt.empty() ? body_out : block(s->alt, body_out);
        connect(step_out, head);
        std::vector<Pending> out{{head, EdgeKind::False}};
        for (const auto& b : loops_.back().breaks) out.push_back(b);
        loops_.pop_back();
        return out;
      }
    }
    return pending;
  }

 private:
  std::vector<LoopCtx> loops_;
};

}  // namespace

Cfg build_cfg(const lang::Function& fn) {
  Builder b(fn);
  int entry = b.add_node(NodeKind::Entry, nullptr);
  b.cfg.nodes[entry].loc.function = fn.name;
  b.cfg.entry = entry;
  auto out = b.block(fn.body, {{entry, EdgeKind::Fallthrough}});
  if (!out.empty()) {
    int exit = b.add_node(NodeKind::Exit, nullptr);
    b.cfg.nodes[exit].implicit = true;
    b.cfg.nodes[exit].loc.function = fn.name;
    b.cfg.nodes[exit].loc.span = fn.span;
    b.connect(out, exit);
  }
  return b.cfg;
}

LineGraph line_graph(const Cfg& cfg) {
  LineGraph lg;
  std::size_t n = cfg.edges.size();
  lg.adjacency.assign(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    lg.edge_of.push_back(static_cast<int>(i));
    lg.loc_of.push_back(cfg.nodes[cfg.edges[i].from].loc);
    for (std::size_t j = 0; j < n; ++j)
      lg.adjacency[i][j] = cfg.edges[i].to == cfg.edges[j].from;
  }
  return lg;
}

std::string to_dot(const Cfg& cfg) {
  std::ostringstream os;
  os << "digraph \"" << cfg.function << "\" {\n  node [shape=box, fontname=monospace];\n";
  for (const auto& n : cfg.nodes) {
    std::string label = n.label();
    std::string esc;
    for (char c : label) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    os << "  n" << n.id << " [label=\"" << n.id << ": " << esc << "\"";
    if (n.kind == NodeKind::Branch || n.kind == NodeKind::LoopHead) os << ", shape=diamond";
    if (n.kind == NodeKind::Entry || n.kind == NodeKind::Exit) os << ", shape=oval";
    os << "];\n";
  }
  for (const auto& e : cfg.edges) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.kind != EdgeKind::Fallthrough) os << " [label=\"" << to_string(e.kind) << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const Cfg& cfg, const LineGraph& lg) {
  std::ostringstream os;
  os << "digraph \"" << cfg.function << "_line\" {\n";
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const Edge& e = cfg.edges[lg.edge_of[i]];
    os << "  e" << i << " [label=\"" << e.from << "->" << e.to << "\"];\n";
  }
  for (std::size_t i = 0; i < lg.size(); ++i)
    for (std::size_t j = 0; j < lg.size(); ++j)
      if (lg.adjacency[i][j]) os << "  e" << i << " -> e" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace pathfix::cfg
