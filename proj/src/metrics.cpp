#include "graphhop/metrics.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "graphhop/strings.hpp"

namespace graphhop {

int graph_match(const EvidenceGraph& pred, const EvidenceGraph& gold) {
  return pred.nodes() == gold.nodes() && pred.edges() == gold.edges() ? 1 : 0;
}

namespace {

struct DegreeSig {
  size_t in = 0;
  size_t out = 0;
  bool operator==(const DegreeSig&) const = default;
};

std::map<FactId, DegreeSig> degree_signatures(const EvidenceGraph& g) {
  std::map<FactId, DegreeSig> sig;
  for (FactId n : g.nodes()) sig[n];
  for (const Edge& e : g.edges()) {
    ++sig[e.first].out;
    ++sig[e.second].in;
  }
  return sig;
}

// Backtracking search for a bijection mapping the root to the root and
// pred edges exactly onto gold edges. Graphs here are tiny, so degree
// pruning is all the cleverness this needs.
bool find_isomorphism(const std::vector<FactId>& pred_nodes,
                      const std::vector<FactId>& gold_nodes,
                      const std::map<FactId, DegreeSig>& pred_sig,
                      const std::map<FactId, DegreeSig>& gold_sig,
                      const EvidenceGraph& pred, const EvidenceGraph& gold,
                      size_t idx, std::map<FactId, FactId>& mapping,
                      std::set<FactId>& used) {
  if (idx == pred_nodes.size()) return true;
  FactId u = pred_nodes[idx];
  for (FactId v : gold_nodes) {
    if (used.count(v)) continue;
    if (!(pred_sig.at(u) == gold_sig.at(v))) continue;
    // Edges between u and already-mapped nodes must map onto gold edges.
    bool ok = true;
    for (const auto& [pu, gv] : mapping) {
      if (pred.has_edge(u, pu) != gold.has_edge(v, gv) ||
          pred.has_edge(pu, u) != gold.has_edge(gv, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    mapping[u] = v;
    used.insert(v);
    if (find_isomorphism(pred_nodes, gold_nodes, pred_sig, gold_sig, pred, gold,
                         idx + 1, mapping, used)) {
      return true;
    }
    mapping.erase(u);
    used.erase(v);
  }
  return false;
}

}  // namespace

int graph_structure(const EvidenceGraph& pred, const EvidenceGraph& gold) {
  if (pred.nodes().size() != gold.nodes().size() ||
      pred.edges().size() != gold.edges().size()) {
    return 0;
  }
  auto pred_sig = degree_signatures(pred);
  auto gold_sig = degree_signatures(gold);
  if (!(pred_sig.at(kQuestionNode) == gold_sig.at(kQuestionNode))) return 0;

  std::vector<FactId> pred_nodes(pred.evidence_nodes().begin(),
                                 pred.evidence_nodes().end());
  std::vector<FactId> gold_nodes(gold.evidence_nodes().begin(),
                                 gold.evidence_nodes().end());
  std::map<FactId, FactId> mapping{{kQuestionNode, kQuestionNode}};
  std::set<FactId> used{kQuestionNode};
  return find_isomorphism(pred_nodes, gold_nodes, pred_sig, gold_sig, pred, gold, 0,
                          mapping, used)
             ? 1
             : 0;
}

GedResult graph_edit_distance(const EvidenceGraph& pred, const EvidenceGraph& gold,
                              int budget) {
  (void)budget;
  int dist = 0;
  for (FactId n : pred.nodes()) {
    if (!gold.has_node(n)) ++dist;
  }
  for (FactId n : gold.nodes()) {
    if (!pred.has_node(n)) ++dist;
  }
  for (const Edge& e : pred.edges()) {
    if (!gold.edges().count(e)) ++dist;
  }
  for (const Edge& e : gold.edges()) {
    if (!pred.edges().count(e)) ++dist;
  }
  return {dist, true};
}

SetMetrics set_metrics(const std::set<FactId>& pred_ids,
                       const std::set<FactId>& gold_ids) {
  size_t inter = 0;
  for (FactId id : pred_ids) {
    if (gold_ids.count(id)) ++inter;
  }
  SetMetrics m;
  m.precision = pred_ids.empty() ? 0.0 : static_cast<double>(inter) / pred_ids.size();
  m.recall = gold_ids.empty() ? 0.0 : static_cast<double>(inter) / gold_ids.size();
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  m.em = pred_ids == gold_ids ? 1 : 0;
  return m;
}

double bsc(const EvidenceGraph& gf, const EvidenceGraph& gb) {
  size_t inter = 0;
  for (const Edge& e : gf.edges()) {
    if (gb.edges().count(e)) ++inter;
  }
  size_t uni = gf.edges().size() + gb.edges().size() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

int qa_em(const std::string& pred_answer, const std::string& gold_answer) {
  return normalize_answer(pred_answer) == normalize_answer(gold_answer) ? 1 : 0;
}

}  // namespace graphhop
