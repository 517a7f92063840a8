#pragma once

#include <optional>
#include <set>

#include "graphhop/graph.hpp"

namespace graphhop {

struct SetMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int em = 0;
};

struct GedResult {
  int distance = 0;
  bool exact = true;
};

// Per-instance metric values. Graph metrics are absent for methods that
// retrieve a flat evidence set.
struct MetricsReport {
  std::optional<int> gm;
  std::optional<int> gs;
  std::optional<GedResult> ged;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int set_em = 0;
  int qa_em = 0;
};

// 1 iff node sets and edge sets are both equal.
int graph_match(const EvidenceGraph& pred, const EvidenceGraph& gold);

// 1 iff a root-pinned bijection maps pred edges exactly onto gold edges.
int graph_structure(const EvidenceGraph& pred, const EvidenceGraph& gold);

// Minimum unit-cost edit count (insert/delete node, insert/delete edge)
// transforming pred into gold. Node identity is the label and the root is
// never deletable, so no renaming move exists: every differing node or
// edge costs exactly one operation and the symmetric difference is already
// the optimal edit sequence. The budget therefore never truncates; it is
// kept so callers can pin one.
GedResult graph_edit_distance(const EvidenceGraph& pred, const EvidenceGraph& gold,
                              int budget = 1 << 20);

// Precision/recall/F1/EM over evidence-id sets (root excluded by callers).
SetMetrics set_metrics(const std::set<FactId>& pred_ids,
                       const std::set<FactId>& gold_ids);

// Jaccard overlap of the two edge sets; 0 when both are empty.
double bsc(const EvidenceGraph& gf, const EvidenceGraph& gb);

// 1 iff the answers match after lowercasing, trimming and whitespace
// collapsing.
int qa_em(const std::string& pred_answer, const std::string& gold_answer);

}  // namespace graphhop
