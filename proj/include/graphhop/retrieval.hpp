#pragma once

#include <map>

#include "graphhop/graph.hpp"
#include "graphhop/scorer.hpp"

namespace graphhop {

struct RetrievalConfig {
  int max_depth = 4;
  int max_nodes = 16;
  int top_k_per_path = 2;   // wired into the scorer's accept policy
  int backward_seed_k = 3;

  void validate() const;
};

struct RetrievalResult {
  EvidenceGraph graph;
  // Set when a depth/node limit stopped the search, when backward chains
  // had to be discarded, or when nothing connected to the root.
  bool truncated = false;
  // Acceptance score per committed edge (max over acceptances).
  std::map<Edge, double> edge_scores;
};

// Depth-first expansion from the root. Each accepted candidate extends the
// current path; a fact already on the path is never revisited, so every
// root-to-leaf path is repetition-free by construction.
RetrievalResult forward_retrieve(const TextualDatabase& db, const Scorer& scorer,
                                 const std::string& question,
                                 const RetrievalConfig& cfg);

// Seeds from the scorer's top-ranked facts for the question, then walks
// predecessors until the scorer accepts the question itself. Chains that
// never connect to the root are discarded.
RetrievalResult backward_retrieve(const TextualDatabase& db, const Scorer& scorer,
                                  const std::string& question,
                                  const RetrievalConfig& cfg);

}  // namespace graphhop
