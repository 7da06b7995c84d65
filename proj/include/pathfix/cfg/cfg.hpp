#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pathfix/lang/ast.hpp"

namespace pathfix::cfg {

enum class NodeKind { Entry, Exit, Stmt, Branch, LoopHead };
enum class EdgeKind { Fallthrough, True, False, Back };

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Stmt;
  lang::Location loc;       // empty path for Entry and implicit exits
  lang::StmtPtr stmt;       // null for Entry and implicit exits
  bool implicit = false;    // exit reached by falling off the function end
  std::vector<int> loops;   // enclosing LoopHead ids, outermost first
  std::string label() const;
};

struct Edge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::Fallthrough;
  /// Branch polarity of the source, kept on Back edges that leave a Branch
  /// or LoopHead directly.
  std::optional<bool> polarity;
};

struct Cfg {
  std::string function;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int entry = 0;

  std::vector<int> exits() const;
  std::vector<int> out_edges(int node) const;
  std::vector<int> in_edges(int node) const;
  /// Node for the statement at `loc`, or -1.
  int find(const lang::Location& loc) const;
  /// Polarity an edge carries: True/False kinds or the Back edge's polarity.
  std::optional<bool> polarity(int edge) const;
};

Cfg build_cfg(const lang::Function& fn);

struct LineGraph {
  std::vector<std::vector<char>> adjacency;  // M[i][j]: edge i then edge j
  std::vector<int> edge_of;                  // line node -> cfg edge
  std::vector<lang::Location> loc_of;        // location of the edge's source
  std::size_t size() const { return edge_of.size(); }
};

LineGraph line_graph(const Cfg& cfg);

struct ContextStep {
  int node = 0;
  std::optional<bool> polarity;  // set for Branch/LoopHead nodes
};

struct CandidatePath {
  int pattern = 1;
  std::vector<int> nodes;  // fault node first, exit last
  std::vector<int> edges;  // cfg edges between consecutive nodes
  int exit = -1;
  std::vector<ContextStep> pre_context;  // forward order, ends next to the fault
  std::string describe(const Cfg& cfg) const;
};

struct PathLimits {
  int max_paths = 64;
  int max_len = 64;
  int loop_unroll = 1;
};

struct PathSet {
  std::vector<CandidatePath> paths;
  bool truncated = false;
  std::string truncation;  // "max_paths" or "max_len"
};

/// Pre-execution contexts of the fault node: one chain per relevant
/// predecessor (back-edge predecessors for a loop condition).
std::vector<std::vector<ContextStep>> pre_contexts(const Cfg& cfg, int fault);

/// DFS over the line graph from the fault node to the given exits. Each
/// forward path is paired with every pre-context. Pattern 1 marks paths that
/// end at `fault_exit`.
PathSet enumerate_paths(const Cfg& cfg, const LineGraph& lg, const lang::Location& fault,
                        const std::set<int>& exits, const PathLimits& limits,
                        std::optional<int> fault_exit);

std::string to_dot(const Cfg& cfg);
std::string to_dot(const Cfg& cfg, const LineGraph& lg);

}  // namespace pathfix::cfg
