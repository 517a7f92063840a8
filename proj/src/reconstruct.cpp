#include "graphhop/reconstruct.hpp"

#include <algorithm>
#include <stdexcept>

namespace graphhop {

std::string to_string(FuseMode m) {
  return m == FuseMode::kUnion ? "union" : "intersection";
}

FuseMode fuse_mode_from_string(const std::string& s) {
  if (s == "union") return FuseMode::kUnion;
  if (s == "intersection") return FuseMode::kIntersection;
  throw std::invalid_argument("unknown fuse mode: " + s);
}

namespace {

// Keeps only the component reachable from the root.
EvidenceGraph prune_unreachable(const EvidenceGraph& g) {
  std::set<FactId> keep{kQuestionNode};
  std::vector<FactId> stack{kQuestionNode};
  while (!stack.empty()) {
    FactId n = stack.back();
    stack.pop_back();
    for (FactId c : g.children(n)) {
      if (keep.insert(c).second) stack.push_back(c);
    }
  }
  EvidenceGraph out;
  for (const Edge& e : g.edges()) {
    if (keep.count(e.first) && keep.count(e.second)) out.add_edge(e.first, e.second);
  }
  return out;
}

// Finds one cycle and returns its edges, or empty when acyclic.
std::vector<Edge> find_cycle(const EvidenceGraph& g) {
  enum class Color { kWhite, kGrey, kBlack };
  std::map<FactId, Color> color;
  for (FactId n : g.nodes()) color[n] = Color::kWhite;
  std::vector<Edge> path;
  std::vector<Edge> cycle;

  std::function<bool(FactId)> dfs = [&](FactId n) {
    color[n] = Color::kGrey;
    for (FactId c : g.children(n)) {
      if (color[c] == Color::kGrey) {
        // Unwind the path back to c.
        cycle.push_back({n, c});
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
          cycle.push_back(*it);
          if (it->first == c) break;
        }
        return true;
      }
      if (color[c] == Color::kWhite) {
        path.push_back({n, c});
        if (dfs(c)) return true;
        path.pop_back();
      }
    }
    color[n] = Color::kBlack;
    return false;
  };

  for (FactId n : g.nodes()) {
    if (color[n] == Color::kWhite && dfs(n)) return cycle;
  }
  return {};
}

EvidenceGraph union_graphs(const EvidenceGraph& a, const EvidenceGraph& b) {
  EvidenceGraph out;
  for (FactId n : a.nodes()) out.add_node(n);
  for (FactId n : b.nodes()) out.add_node(n);
  for (const Edge& e : a.edges()) out.add_edge(e.first, e.second);
  for (const Edge& e : b.edges()) out.add_edge(e.first, e.second);
  return out;
}

}  // namespace

FuseResult fuse(const EvidenceGraph& gf, const EvidenceGraph& gb, double gamma,
                FuseMode mode, const std::map<Edge, double>* gf_edge_scores) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }

  FuseResult result;
  result.bsc_value = bsc(gf, gb);
  if (result.bsc_value <= gamma) {
    result.graph = gb;
    return result;
  }
  result.combined = true;

  if (mode == FuseMode::kIntersection) {
    EvidenceGraph inter;
    for (const Edge& e : gf.edges()) {
      if (gb.edges().count(e)) inter.add_edge(e.first, e.second);
    }
    result.graph = prune_unreachable(inter);
    return result;
  }

  EvidenceGraph merged = union_graphs(gf, gb);

  // Flag nodes whose union parent set mixes contributions the two sides
  // do not agree on; a single-parent reading would resolve these
  // differently than the plain edge union does.
  for (FactId n : merged.evidence_nodes()) {
    std::set<FactId> pf, pb;
    for (FactId p : gf.parents(n)) pf.insert(p);
    for (FactId p : gb.parents(n)) pb.insert(p);
    std::set<FactId> all = pf;
    all.insert(pb.begin(), pb.end());
    if (all.size() >= 2 && pf != pb) result.dedup_ambiguous = true;
  }

  // The union of two rooted DAGs can be cyclic; every such cycle contains
  // a forward-only edge (gb alone is acyclic), so dropping forward-only
  // edges always resolves it.
  while (true) {
    std::vector<Edge> cycle = find_cycle(merged);
    if (cycle.empty()) break;
    std::vector<Edge> droppable;
    for (const Edge& e : cycle) {
      if (!gb.edges().count(e)) droppable.push_back(e);
    }
    if (droppable.empty()) {
      throw std::logic_error("cycle without a forward-only edge");
    }
    auto score_of = [&](const Edge& e) {
      if (gf_edge_scores == nullptr) return 0.0;
      auto it = gf_edge_scores->find(e);
      return it == gf_edge_scores->end() ? 0.0 : it->second;
    };
    Edge victim = *std::min_element(
        droppable.begin(), droppable.end(), [&](const Edge& a, const Edge& b) {
          double sa = score_of(a), sb = score_of(b);
          if (sa != sb) return sa < sb;
          return a < b;
        });
    EvidenceGraph rebuilt;
    for (FactId n : merged.nodes()) rebuilt.add_node(n);
    for (const Edge& e : merged.edges()) {
      if (e != victim) rebuilt.add_edge(e.first, e.second);
    }
    merged = rebuilt;
    result.cycle_dropped = true;
  }

  result.graph = result.cycle_dropped ? prune_unreachable(merged) : merged;
  return result;
}

std::vector<SweepRow> gamma_sweep(const std::vector<QAInstance>& instances,
                                  const ScorerFactory& make_scorer,
                                  const std::vector<double>& grid,
                                  const SweepOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("gamma grid must be non-empty");
  for (double g : grid) {
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
  }

  struct Cached {
    RetrievalResult forward;
    RetrievalResult backward;
  };
  std::vector<Cached> cached;
  cached.reserve(instances.size());
  for (const QAInstance& inst : instances) {
    std::unique_ptr<Scorer> scorer = make_scorer(inst);
    cached.push_back({forward_retrieve(inst.database, *scorer, inst.question,
                                       opts.retrieval),
                      backward_retrieve(inst.database, *scorer, inst.question,
                                        opts.retrieval)});
  }

  std::vector<SweepRow> rows;
  for (double gamma : grid) {
    double f1_sum = 0.0;
    double gm_sum = 0.0;
    for (size_t i = 0; i < instances.size(); ++i) {
      FuseResult fused = fuse(cached[i].forward.graph, cached[i].backward.graph,
                              gamma, opts.mode, &cached[i].forward.edge_scores);
      SetMetrics sm = set_metrics(fused.graph.evidence_nodes(),
                                  instances[i].gold_graph.evidence_nodes());
      f1_sum += sm.f1;
      gm_sum += graph_match(fused.graph, instances[i].gold_graph);
    }
    size_t n = instances.empty() ? 1 : instances.size();
    rows.push_back({gamma, 100.0 * f1_sum / n, 100.0 * gm_sum / n});
  }
  return rows;
}

}  // namespace graphhop
