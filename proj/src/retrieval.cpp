#include "graphhop/retrieval.hpp"

#include <stdexcept>

namespace graphhop {

void RetrievalConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
  if (top_k_per_path < 1) throw std::invalid_argument("top_k_per_path must be >= 1");
  if (backward_seed_k < 1) throw std::invalid_argument("backward_seed_k must be >= 1");
}

namespace {

void record_edge(RetrievalResult& result, FactId parent, FactId child, double score) {
  result.graph.add_edge(parent, child);
  auto [it, inserted] = result.edge_scores.try_emplace({parent, child}, score);
  if (!inserted && score > it->second) it->second = score;
}

struct ForwardWalker {
  const Scorer& scorer;
  const std::string& question;
  const RetrievalConfig& cfg;
  RetrievalResult& result;

  void visit(std::vector<FactId>& path) {
    ScorerQuery query{question, path, Direction::kForward};
    std::set<FactId> exclude(path.begin(), path.end());
    std::vector<ScoredCandidate> cands = scorer.score_candidates(query, exclude);

    for (const ScoredCandidate& c : cands) {
      if (!c.accept || c.fact_id == kQuestionNode) continue;
      if (static_cast<int>(path.size()) >= cfg.max_depth) {
        result.truncated = true;  // would extend past the depth limit
        return;
      }
      bool is_new = !result.graph.has_node(c.fact_id);
      if (is_new &&
          static_cast<int>(result.graph.evidence_count()) >= cfg.max_nodes) {
        result.truncated = true;
        continue;
      }
      FactId parent = path.empty() ? kQuestionNode : path.back();
      record_edge(result, parent, c.fact_id, c.score);
      path.push_back(c.fact_id);
      visit(path);
      path.pop_back();
    }
  }
};

struct BackwardWalker {
  const Scorer& scorer;
  const std::string& question;
  const RetrievalConfig& cfg;
  RetrievalResult& result;
  bool any_closed = false;

  // path: front = node closest to the root so far, back = seed.
  void visit(std::vector<FactId>& path, std::vector<std::pair<Edge, double>>& pending) {
    ScorerQuery query{question, path, Direction::kBackward};
    std::set<FactId> exclude(path.begin(), path.end());
    std::vector<ScoredCandidate> cands = scorer.score_candidates(query, exclude);

    for (const ScoredCandidate& c : cands) {
      if (!c.accept) continue;
      if (c.fact_id == kQuestionNode) {
        commit(path, pending, c.score);
        continue;
      }
      if (static_cast<int>(path.size()) >= cfg.max_depth) {
        result.truncated = true;
        continue;
      }
      path.insert(path.begin(), c.fact_id);
      pending.insert(pending.begin(), {{c.fact_id, path[1]}, c.score});
      visit(path, pending);
      pending.erase(pending.begin());
      path.erase(path.begin());
    }
  }

  void commit(const std::vector<FactId>& path,
              const std::vector<std::pair<Edge, double>>& pending, double root_score) {
    // Node budget and acyclicity are checked against a tentative copy;
    // chains that break either are dropped rather than emitted.
    EvidenceGraph trial = result.graph;
    trial.add_edge(kQuestionNode, path.front());
    for (const auto& [edge, score] : pending) {
      (void)score;
      trial.add_edge(edge.first, edge.second);
    }
    if (static_cast<int>(trial.evidence_count()) > cfg.max_nodes ||
        !is_acyclic(trial)) {
      result.truncated = true;
      return;
    }
    record_edge(result, kQuestionNode, path.front(), root_score);
    for (const auto& [edge, score] : pending) {
      record_edge(result, edge.first, edge.second, score);
    }
    any_closed = true;
  }
};

}  // namespace

RetrievalResult forward_retrieve(const TextualDatabase& db, const Scorer& scorer,
                                 const std::string& question,
                                 const RetrievalConfig& cfg) {
  cfg.validate();
  if (db.empty()) throw std::invalid_argument("empty database");
  if (question.empty()) throw std::invalid_argument("empty question");

  RetrievalResult result;
  ForwardWalker walker{scorer, question, cfg, result};
  std::vector<FactId> path;
  walker.visit(path);
  return result;
}

RetrievalResult backward_retrieve(const TextualDatabase& db, const Scorer& scorer,
                                  const std::string& question,
                                  const RetrievalConfig& cfg) {
  cfg.validate();
  if (db.empty()) throw std::invalid_argument("empty database");
  if (question.empty()) throw std::invalid_argument("empty question");

  RetrievalResult result;
  BackwardWalker walker{scorer, question, cfg, result};

  ScorerQuery seed_query{question, {}, Direction::kBackward};
  std::vector<ScoredCandidate> ranked = scorer.score_candidates(seed_query, {});
  int taken = 0;
  for (const ScoredCandidate& c : ranked) {
    if (taken >= cfg.backward_seed_k) break;
    if (c.fact_id == kQuestionNode) continue;
    ++taken;
    std::vector<FactId> path{c.fact_id};
    std::vector<std::pair<Edge, double>> pending;
    walker.visit(path, pending);
  }

  if (!walker.any_closed) {
    result.graph = EvidenceGraph{};
    result.edge_scores.clear();
    result.truncated = true;
  }
  return result;
}

}  // namespace graphhop
