#include <algorithm>
#include <functional>
#include <sstream>

#include "pathfix/cfg/cfg.hpp"

namespace pathfix::cfg {
namespace {

bool is_condition(const Node& n) {
  return n.kind == NodeKind::Branch || n.kind == NodeKind::LoopHead;
}

std::vector<ContextStep> walk_back(const Cfg& cfg, int fault, int first_edge) {
  std::vector<ContextStep> rev;
  int e = first_edge;
  bool first = true;
  for (;;) {
    int p = cfg.edges[e].from;
    const Node& n = cfg.nodes[p];
    if (p == fault || n.kind == NodeKind::Entry) break;
    if (!first && !is_condition(n)) break;
    ContextStep step{p, std::nullopt};
    if (is_condition(n)) step.polarity = cfg.polarity(e);
    rev.push_back(step);
    first = false;
    auto in = cfg.in_edges(p);
    if (in.size() != 1 || n.kind == NodeKind::LoopHead) break;
    e = in[0];
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

int rank(const Cfg& cfg, int edge) {
  auto p = cfg.polarity(edge);
  if (!p) return 1;
  return *p ? 0 : 2;
}

}  // namespace

std::vector<std::vector<ContextStep>> pre_contexts(const Cfg& cfg, int fault) {
  std::vector<int> in = cfg.in_edges(fault);
  if (cfg.nodes[fault].kind == NodeKind::LoopHead) {
    std::vector<int> back;
    for (int e : in)
      if (cfg.edges[e].kind == EdgeKind::Back) back.push_back(e);
    if (!back.empty()) in = back;
  }
  std::vector<std::vector<ContextStep>> out;
  for (int e : in) {
    auto chain = walk_back(cfg, fault, e);
    bool dup = std::any_of(out.begin(), out.end(), [&](const auto& c) {
      return c.size() == chain.size() &&
             std::equal(c.begin(), c.end(), chain.begin(), [](const auto& a, const auto& b) {
               return a.node == b.node && a.polarity == b.polarity;
             });
    });
    if (!dup) out.push_back(std::move(chain));
  }
  if (out.empty()) out.emplace_back();
  return out;
}

PathSet enumerate_paths(const Cfg& cfg, const LineGraph& lg, const lang::Location& fault_loc,
                        const std::set<int>& exits, const PathLimits& limits,
                        std::optional<int> fault_exit) {
  PathSet result;
  int fault = cfg.find(fault_loc);
  if (fault < 0)
    throw lang::LangError(lang::LangError::Kind::LocationNotFound, fault_loc.span,
                          "fault location " + fault_loc.key() + " is not in the CFG");
  const auto& enclosing = cfg.nodes[fault].loops;

  // Line-graph nodes leaving the fault are the DFS roots; adjacency drives
  // each step.
  std::vector<std::vector<int>> next(lg.size());
  for (std::size_t i = 0; i < lg.size(); ++i) {
    for (std::size_t j = 0; j < lg.size(); ++j)
      if (lg.adjacency[i][j]) next[i].push_back(static_cast<int>(j));
    std::stable_sort(next[i].begin(), next[i].end(), [&](int a, int b) {
      return rank(cfg, lg.edge_of[a]) < rank(cfg, lg.edge_of[b]);
    });
  }
  std::vector<int> roots;
  for (std::size_t i = 0; i < lg.size(); ++i)
    if (cfg.edges[lg.edge_of[i]].from == fault) roots.push_back(static_cast<int>(i));
  std::stable_sort(roots.begin(), roots.end(), [&](int a, int b) {
    return rank(cfg, lg.edge_of[a]) < rank(cfg, lg.edge_of[b]);
  });

  std::vector<std::pair<std::vector<int>, std::vector<int>>> forward;  // nodes, edges
  std::vector<int> nodes{fault}, edges;
  std::vector<int> back_used(cfg.edges.size(), 0);
  std::set<int> visited{fault};
  std::set<int> exit_only;  // loop heads re-entered through a back edge
  bool stop = false;

  std::function<void(int)> dfs = [&](int ln) {
    if (stop) return;
    int e = lg.edge_of[ln];
    const Edge& edge = cfg.edges[e];
    int from = edge.from, to = edge.to;
    if (to == fault) return;
    if (exit_only.count(from) && cfg.polarity(e) != std::optional<bool>(false)) return;
    bool back = edge.kind == EdgeKind::Back;
    if (back && back_used[e] >= limits.loop_unroll) return;
    if (!back && visited.count(to)) return;
    if (static_cast<int>(nodes.size()) + 1 > limits.max_len) {
      result.truncated = true;
      result.truncation = "max_len";
      return;
    }
    nodes.push_back(to);
    edges.push_back(e);
    bool fresh = visited.insert(to).second;
    if (back) ++back_used[e];
    bool forced = back && std::find(enclosing.begin(), enclosing.end(), to) != enclosing.end();
    bool added_forced = forced && exit_only.insert(to).second;
    if (cfg.nodes[to].kind == NodeKind::Exit) {
      if (exits.count(to)) forward.emplace_back(nodes, edges);
    } else {
      for (int nx : next[ln]) dfs(nx);
    }
    if (added_forced) exit_only.erase(to);
    if (back) --back_used[e];
    if (fresh) visited.erase(to);
    nodes.pop_back();
    edges.pop_back();
  };
  for (int r : roots) dfs(r);

  auto contexts = pre_contexts(cfg, fault);
  for (const auto& [ns, es] : forward) {
    for (const auto& ctx : contexts) {
      if (static_cast<int>(result.paths.size()) >= limits.max_paths) {
        result.truncated = true;
        result.truncation = "max_paths";
        return result;
      }
      CandidatePath p;
      p.nodes = ns;
      p.edges = es;
      p.exit = ns.back();
      p.pre_context = ctx;
      p.pattern = fault_exit && *fault_exit == p.exit ? 1 : 2;
      result.paths.push_back(std::move(p));
    }
  }
  return result;
}

std::string CandidatePath::describe(const Cfg& cfg) const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < pre_context.size(); ++i) {
    const auto& s = pre_context[i];
    os << (i ? ", " : "") << cfg.nodes[s.node].label();
    if (s.polarity) os << (*s.polarity ? " T" : " F");
  }
  os << "] ";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) {
      auto pol = cfg.polarity(edges[i - 1]);
      os << (pol ? (*pol ? " -T-> " : " -F-> ") : " -> ");
    }
    os << cfg.nodes[nodes[i]].label();
  }
  return os.str();
}

}  // namespace pathfix::cfg
