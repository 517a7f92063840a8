#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "graphhop/instance.hpp"
#include "graphhop/metrics.hpp"
#include "graphhop/retrieval.hpp"

namespace graphhop {

// Combiner used when the consistency score clears gamma. The union form
// follows the fusion equation; the intersection form realises the variant
// described in prose and stays available for comparison runs.
enum class FuseMode { kUnion, kIntersection };

std::string to_string(FuseMode m);
FuseMode fuse_mode_from_string(const std::string& s);

struct FuseResult {
  EvidenceGraph graph;
  double bsc_value = 0.0;
  bool combined = false;       // consistency cleared gamma
  bool cycle_dropped = false;  // union created a cycle; forward edges dropped
  // The union gave some node parents from both sides that neither side
  // agreed on; a per-node parent-cap reading would have chosen differently.
  bool dedup_ambiguous = false;
};

// Combines the forward and backward subgraphs: the combiner result when
// bsc(gf, gb) > gamma, otherwise gb unchanged. Forward edge scores, when
// given, pick which forward edges to drop first on cycles (ascending
// score, then ascending edge).
FuseResult fuse(const EvidenceGraph& gf, const EvidenceGraph& gb, double gamma,
                FuseMode mode = FuseMode::kUnion,
                const std::map<Edge, double>* gf_edge_scores = nullptr);

using ScorerFactory =
    std::function<std::unique_ptr<Scorer>(const QAInstance&)>;

struct SweepRow {
  double gamma = 0.0;
  double f1_pct = 0.0;
  double gm_pct = 0.0;
};

struct SweepOptions {
  RetrievalConfig retrieval;
  FuseMode mode = FuseMode::kUnion;
};

// Retrieves each instance once, fuses per grid value, and reports the
// aggregate evidence-set F1 and graph-match rate per gamma (percentages).
std::vector<SweepRow> gamma_sweep(const std::vector<QAInstance>& instances,
                                  const ScorerFactory& make_scorer,
                                  const std::vector<double>& grid,
                                  const SweepOptions& opts);

}  // namespace graphhop
