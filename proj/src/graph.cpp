#include "graphhop/graph.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include "graphhop/strings.hpp"

namespace graphhop {

void EvidenceGraph::add_edge(FactId parent, FactId child) {
  nodes_.insert(parent);
  nodes_.insert(child);
  edges_.insert({parent, child});
}

std::set<FactId> EvidenceGraph::evidence_nodes() const {
  std::set<FactId> out = nodes_;
  out.erase(kQuestionNode);
  return out;
}

std::vector<FactId> EvidenceGraph::children(FactId id) const {
  std::vector<FactId> out;
  for (auto it = edges_.lower_bound({id, std::numeric_limits<FactId>::min()});
       it != edges_.end() && it->first == id; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::vector<FactId> EvidenceGraph::parents(FactId id) const {
  std::vector<FactId> out;
  for (const Edge& e : edges_) {
    if (e.second == id) out.push_back(e.first);
  }
  return out;
}

std::vector<FactId> EvidenceGraph::leaves() const {
  std::vector<FactId> out;
  for (FactId n : nodes_) {
    if (n == kQuestionNode) continue;
    if (children(n).empty()) out.push_back(n);
  }
  return out;
}

EvidenceGraph graph_from_edges(const std::vector<Edge>& edges) {
  EvidenceGraph g;
  for (const Edge& e : edges) g.add_edge(e.first, e.second);
  return g;
}

std::string to_string(ConstraintViolation::Kind k) {
  using Kind = ConstraintViolation::Kind;
  switch (k) {
    case Kind::kMissingProvenance: return "missing-provenance";
    case Kind::kUnrooted: return "unrooted";
    case Kind::kCycle: return "cycle";
    case Kind::kUnreachable: return "unreachable-from-root";
    case Kind::kRepeatOnPath: return "repeat-on-path";
  }
  return "?";
}

bool is_acyclic(const EvidenceGraph& g) {
  // Kahn's algorithm.
  std::map<FactId, size_t> in_degree;
  for (FactId n : g.nodes()) in_degree[n] = 0;
  for (const Edge& e : g.edges()) ++in_degree[e.second];

  std::vector<FactId> stack;
  for (const auto& [node, deg] : in_degree) {
    if (deg == 0) stack.push_back(node);
  }
  size_t removed = 0;
  while (!stack.empty()) {
    FactId n = stack.back();
    stack.pop_back();
    ++removed;
    for (FactId c : g.children(n)) {
      if (--in_degree[c] == 0) stack.push_back(c);
    }
  }
  return removed == g.nodes().size();
}

namespace {

std::set<FactId> reachable_from_root(const EvidenceGraph& g) {
  std::set<FactId> seen;
  if (!g.has_node(kQuestionNode)) return seen;
  std::vector<FactId> stack{kQuestionNode};
  seen.insert(kQuestionNode);
  while (!stack.empty()) {
    FactId n = stack.back();
    stack.pop_back();
    for (FactId c : g.children(n)) {
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return seen;
}

// DFS over root-to-leaf paths checking for a repeated node. Only reachable
// when the structure is already cyclic, but checked on its own anyway.
bool path_repeats(const EvidenceGraph& g, FactId node, std::set<FactId>& on_path,
                  std::string& where) {
  for (FactId c : g.children(node)) {
    if (on_path.count(c)) {
      where = "node " + std::to_string(c) + " repeats";
      return true;
    }
    on_path.insert(c);
    if (path_repeats(g, c, on_path, where)) return true;
    on_path.erase(c);
  }
  return false;
}

}  // namespace

std::vector<ConstraintViolation> validate_structure(const EvidenceGraph& g) {
  using Kind = ConstraintViolation::Kind;
  std::vector<ConstraintViolation> out;

  if (g.nodes().empty() || !g.has_node(kQuestionNode)) {
    out.push_back({Kind::kUnrooted, "graph has no question root"});
    return out;
  }
  for (const Edge& e : g.edges()) {
    if (e.second == kQuestionNode) {
      out.push_back({Kind::kCycle, "edge into the root"});
      return out;
    }
  }

  bool acyclic = is_acyclic(g);
  if (!acyclic) {
    out.push_back({Kind::kCycle, "graph contains a cycle"});
  }

  std::set<FactId> reachable = reachable_from_root(g);
  for (FactId n : g.nodes()) {
    if (!reachable.count(n)) {
      out.push_back(
          {Kind::kUnreachable, "node " + std::to_string(n) + " has no path from Q"});
    }
  }

  if (acyclic) {
    std::set<FactId> on_path{kQuestionNode};
    std::string where;
    if (path_repeats(g, kQuestionNode, on_path, where)) {
      out.push_back({Kind::kRepeatOnPath, where});
    }
  }
  return out;
}

std::vector<ConstraintViolation> validate_graph(const EvidenceGraph& g,
                                                const TextualDatabase& db) {
  using Kind = ConstraintViolation::Kind;
  std::vector<ConstraintViolation> out = validate_structure(g);
  for (FactId n : g.evidence_nodes()) {
    const Fact* fact = db.find(n);
    if (fact == nullptr) {
      out.push_back(
          {Kind::kMissingProvenance, "node " + std::to_string(n) + " not in database"});
    } else if (fact->provenance.empty()) {
      out.push_back({Kind::kMissingProvenance,
                     "fact " + std::to_string(n) + " has no provenance triple"});
    }
  }
  return out;
}

StructureClass structure_class_of(const EvidenceGraph& g) {
  if (!validate_structure(g).empty()) {
    throw std::invalid_argument("structure_class_of requires a valid graph");
  }
  size_t chains = g.children(kQuestionNode).size();
  size_t longest = 0;
  for (const auto& path : root_to_leaf_paths(g)) {
    longest = std::max(longest, path.size());
  }
  bool single_chain = chains == 1;
  bool single_hop = longest == 1;
  if (single_chain) return single_hop ? StructureClass::kScSh : StructureClass::kScMh;
  return single_hop ? StructureClass::kMcSh : StructureClass::kMcMh;
}

namespace {

void collect_paths(const EvidenceGraph& g, FactId node, std::vector<FactId>& prefix,
                   std::vector<std::vector<FactId>>& out) {
  std::vector<FactId> kids = g.children(node);  // ascending by set order
  if (kids.empty()) {
    if (!prefix.empty()) out.push_back(prefix);
    return;
  }
  for (FactId c : kids) {
    prefix.push_back(c);
    collect_paths(g, c, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<FactId>> root_to_leaf_paths(const EvidenceGraph& g) {
  std::vector<std::vector<FactId>> out;
  std::vector<FactId> prefix;
  collect_paths(g, kQuestionNode, prefix, out);
  return out;
}

std::string serialize_chains(const EvidenceGraph& g) {
  std::string out;
  for (const auto& path : root_to_leaf_paths(g)) {
    out.push_back('Q');
    for (FactId id : path) {
      out.push_back('-');
      out.append(std::to_string(id));
    }
    out.push_back(';');
  }
  return out;
}

EvidenceGraph parse_chains(const std::string& s) {
  // Trim outer whitespace; the grammar itself is strict.
  size_t begin = s.find_first_not_of(" \t\r\n");
  size_t end = s.find_last_not_of(" \t\r\n");
  std::string body = begin == std::string::npos ? "" : s.substr(begin, end - begin + 1);

  EvidenceGraph g;
  if (body.empty()) return g;
  if (body.back() != ';') {
    throw ChainParseError("chain string must end with ';'");
  }
  body.pop_back();

  for (const std::string& chain : split(body, ';')) {
    std::vector<std::string> tokens = split(chain, '-');
    if (tokens.empty() || tokens[0] != "Q") {
      throw ChainParseError("chain \"" + chain + "\" does not start at Q");
    }
    if (tokens.size() < 2) {
      throw ChainParseError("chain \"" + chain + "\" has no evidence node");
    }
    FactId prev = kQuestionNode;
    for (size_t i = 1; i < tokens.size(); ++i) {
      const std::string& tok = tokens[i];
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ChainParseError("chain \"" + chain + "\" has malformed token \"" + tok +
                              "\"");
      }
      FactId id = 0;
      try {
        id = std::stoll(tok);
      } catch (const std::exception&) {
        throw ChainParseError("chain \"" + chain + "\" has malformed token \"" + tok +
                              "\"");
      }
      g.add_edge(prev, id);
      prev = id;
    }
    if (!is_acyclic(g)) {
      throw ChainParseError("chain \"" + chain + "\" creates a cycle");
    }
  }
  return g;
}

std::vector<FactId> evidence_order(const EvidenceGraph& g) {
  std::vector<FactId> out;
  std::unordered_set<FactId> seen;
  for (const auto& path : root_to_leaf_paths(g)) {
    for (FactId id : path) {
      if (seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

}  // namespace graphhop
