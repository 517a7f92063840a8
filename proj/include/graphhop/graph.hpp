#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphhop/types.hpp"

namespace graphhop {

using Edge = std::pair<FactId, FactId>;

// Directed acyclic evidence graph rooted at the reserved question node.
// The root is always a member, even for a graph with no evidence.
// Ordered containers keep every traversal deterministic.
class EvidenceGraph {
 public:
  EvidenceGraph() { nodes_.insert(kQuestionNode); }

  void add_node(FactId id) { nodes_.insert(id); }
  void add_edge(FactId parent, FactId child);

  bool has_node(FactId id) const { return nodes_.count(id) > 0; }
  bool has_edge(FactId parent, FactId child) const {
    return edges_.count({parent, child}) > 0;
  }

  const std::set<FactId>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }

  // All nodes except the root.
  std::set<FactId> evidence_nodes() const;
  size_t evidence_count() const { return nodes_.size() - 1; }

  std::vector<FactId> children(FactId id) const;
  std::vector<FactId> parents(FactId id) const;
  std::vector<FactId> leaves() const;  // evidence nodes with no outgoing edge

  bool operator==(const EvidenceGraph& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_;
  }

 private:
  std::set<FactId> nodes_;
  std::set<Edge> edges_;
};

EvidenceGraph graph_from_edges(const std::vector<Edge>& edges);

struct ConstraintViolation {
  enum class Kind {
    kMissingProvenance,  // node has no database fact or an empty provenance
    kUnrooted,           // graph empty or root missing
    kCycle,
    kUnreachable,        // node with no path from the root
    kRepeatOnPath,       // same node twice on one root-to-leaf path
  };
  Kind kind;
  std::string detail;
};

std::string to_string(ConstraintViolation::Kind k);

// Structural constraints only (rooted, acyclic, reachable, no repeats).
std::vector<ConstraintViolation> validate_structure(const EvidenceGraph& g);

// Structural constraints plus the database mapping: every evidence node
// must name a fact that carries at least one provenance triple.
std::vector<ConstraintViolation> validate_graph(const EvidenceGraph& g,
                                                const TextualDatabase& db);

bool is_acyclic(const EvidenceGraph& g);

// Chains = out-degree of the root; hops = longest root-to-leaf path.
// Rejects graphs that fail validate_structure.
StructureClass structure_class_of(const EvidenceGraph& g);

// Every root-to-leaf path, children visited in ascending id order, so the
// enumeration is lexicographic over id sequences. Paths exclude the root.
std::vector<std::vector<FactId>> root_to_leaf_paths(const EvidenceGraph& g);

// Canonical chain notation: each root-to-leaf path rendered as
// "Q-<id>-<id>", paths joined and terminated by ";". A bare root graph
// serializes to the empty string.
std::string serialize_chains(const EvidenceGraph& g);

class ChainParseError : public std::runtime_error {
 public:
  explicit ChainParseError(const std::string& what) : std::runtime_error(what) {}
};

// Inverse of serialize_chains. Accepts any chain order and collapses
// duplicate edges. Throws ChainParseError naming the offending chain.
EvidenceGraph parse_chains(const std::string& s);

// Evidence ids in reading order: chain-major, hop order within a chain,
// shared nodes listed once at first occurrence.
std::vector<FactId> evidence_order(const EvidenceGraph& g);

}  // namespace graphhop
