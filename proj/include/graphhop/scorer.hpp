#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "graphhop/graph.hpp"
#include "graphhop/types.hpp"

namespace graphhop {

// Symbolic stand-in for a learned path state: the question plus the fact
// ids already on the current path, oldest first. For backward queries the
// front entry is the node closest to the root.
struct ScorerQuery {
  std::string question;
  std::vector<FactId> path_state;
  Direction direction = Direction::kForward;
};

struct ScoredCandidate {
  FactId fact_id = 0;
  double score = 0.0;
  bool accept = false;
};

struct AcceptPolicy {
  enum class Mode { kTopK, kThreshold };
  Mode mode = Mode::kTopK;
  int top_k = 2;
  double threshold = 0.0;
  // Top-k acceptance still requires some term overlap.
  double min_score = 1e-9;
};

// Token-statistics index over the fact texts of one database.
class Bm25Index {
 public:
  struct Params {
    double k1 = 1.2;
    double b = 0.75;
  };

  static Bm25Index build(const TextualDatabase& db, Params params = {});

  double score(const std::vector<std::string>& query_tokens, FactId id) const;
  // Same weighting applied to an out-of-index document (used for the
  // question pseudo-document in backward mode).
  double score_virtual(const std::vector<std::string>& query_tokens,
                       const std::vector<std::string>& doc_tokens) const;

  const std::vector<std::string>& doc_tokens(FactId id) const;
  const std::vector<FactId>& ids() const { return ids_; }
  size_t size() const { return ids_.size(); }

  // Deterministic text dump; equal databases produce bit-equal dumps.
  std::string serialize() const;

 private:
  double idf(const std::string& term) const;

  Params params_;
  std::vector<FactId> ids_;
  std::map<FactId, std::vector<std::string>> tokens_;
  std::map<FactId, std::map<std::string, int>> term_counts_;
  std::map<std::string, int> doc_freq_;
  double avg_len_ = 0.0;
};

Bm25Index build_index(const TextualDatabase& db, Bm25Index::Params params = {});

class Scorer {
 public:
  virtual ~Scorer() = default;

  // Scores every candidate not in exclude. exclude must cover
  // q.path_state. Results are sorted by descending score, ascending id.
  // In backward mode the reserved root id may appear as a candidate; its
  // acceptance means "the question is this chain's predecessor".
  virtual std::vector<ScoredCandidate> score_candidates(
      const ScorerQuery& q, const std::set<FactId>& exclude) const = 0;
};

// BM25 term weighting over question + path texts.
class Bm25Scorer : public Scorer {
 public:
  Bm25Scorer(Bm25Index index, AcceptPolicy policy)
      : index_(std::move(index)), policy_(policy) {}

  std::vector<ScoredCandidate> score_candidates(
      const ScorerQuery& q, const std::set<FactId>& exclude) const override;

  const Bm25Index& index() const { return index_; }

 private:
  Bm25Index index_;
  AcceptPolicy policy_;
};

// Seeded hash scores; reproducible for a fixed seed regardless of query
// order.
class RandomScorer : public Scorer {
 public:
  RandomScorer(std::vector<FactId> ids, uint64_t seed, AcceptPolicy policy)
      : ids_(std::move(ids)), seed_(seed), policy_(policy) {}

  std::vector<ScoredCandidate> score_candidates(
      const ScorerQuery& q, const std::set<FactId>& exclude) const override;

 private:
  std::vector<FactId> ids_;
  uint64_t seed_;
  AcceptPolicy policy_;
};

// Accepts exactly the gold neighbours of the current path end. Used to
// establish the perfect-retrieval ceiling.
class OracleScorer : public Scorer {
 public:
  OracleScorer(EvidenceGraph gold, std::vector<FactId> all_ids)
      : gold_(std::move(gold)), all_ids_(std::move(all_ids)) {}

  std::vector<ScoredCandidate> score_candidates(
      const ScorerQuery& q, const std::set<FactId>& exclude) const override;

 private:
  EvidenceGraph gold_;
  std::vector<FactId> all_ids_;
};

// Oracle with each accept/reject decision flipped with probability p.
// Spurious accepts are capped per query so one flip cannot flood a path.
// Coin flips hash (seed, direction, path end, candidate), so outcomes are
// stable across traversal orders and worker counts.
class NoisyOracleScorer : public Scorer {
 public:
  NoisyOracleScorer(EvidenceGraph gold, std::vector<FactId> all_ids, double p,
                    uint64_t seed, int noise_cap = 1)
      : oracle_(std::move(gold), all_ids),
        all_ids_(std::move(all_ids)),
        p_(p),
        seed_(seed),
        noise_cap_(noise_cap) {}

  std::vector<ScoredCandidate> score_candidates(
      const ScorerQuery& q, const std::set<FactId>& exclude) const override;

 private:
  OracleScorer oracle_;
  std::vector<FactId> all_ids_;
  double p_;
  uint64_t seed_;
  int noise_cap_;
};

// Applies a top-k or threshold policy to already-scored candidates and
// re-sorts them canonically.
void apply_accept_policy(std::vector<ScoredCandidate>& candidates,
                         const AcceptPolicy& policy);

}  // namespace graphhop
