#include "graphhop/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "graphhop/rng.hpp"
#include "graphhop/strings.hpp"

namespace graphhop {

Bm25Index Bm25Index::build(const TextualDatabase& db, Params params) {
  if (db.empty()) {
    throw std::invalid_argument("cannot build an index over an empty database");
  }
  Bm25Index index;
  index.params_ = params;
  size_t total_len = 0;
  for (const Fact& fact : db.facts()) {
    index.ids_.push_back(fact.id);
    std::vector<std::string> toks = tokenize(fact.text);
    total_len += toks.size();
    std::map<std::string, int>& counts = index.term_counts_[fact.id];
    for (const std::string& t : toks) ++counts[t];
    for (const auto& [term, n] : counts) {
      (void)n;
      ++index.doc_freq_[term];
    }
    index.tokens_[fact.id] = std::move(toks);
  }
  std::sort(index.ids_.begin(), index.ids_.end());
  index.avg_len_ = index.ids_.empty()
                       ? 0.0
                       : static_cast<double>(total_len) / index.ids_.size();
  return index;
}

Bm25Index build_index(const TextualDatabase& db, Bm25Index::Params params) {
  return Bm25Index::build(db, params);
}

double Bm25Index::idf(const std::string& term) const {
  auto it = doc_freq_.find(term);
  double df = it == doc_freq_.end() ? 0.0 : it->second;
  double n = static_cast<double>(ids_.size());
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Bm25Index::score(const std::vector<std::string>& query_tokens,
                        FactId id) const {
  const auto& counts = term_counts_.at(id);
  double len = static_cast<double>(tokens_.at(id).size());
  double score = 0.0;
  for (const std::string& term : query_tokens) {
    auto it = counts.find(term);
    if (it == counts.end()) continue;
    double tf = it->second;
    double norm = tf * (params_.k1 + 1.0) /
                  (tf + params_.k1 * (1.0 - params_.b + params_.b * len / avg_len_));
    score += idf(term) * norm;
  }
  return score;
}

double Bm25Index::score_virtual(const std::vector<std::string>& query_tokens,
                                const std::vector<std::string>& doc_tokens) const {
  std::map<std::string, int> counts;
  for (const std::string& t : doc_tokens) ++counts[t];
  double len = static_cast<double>(doc_tokens.size());
  if (len == 0.0) return 0.0;
  double score = 0.0;
  for (const std::string& term : query_tokens) {
    auto it = counts.find(term);
    if (it == counts.end()) continue;
    double tf = it->second;
    double norm = tf * (params_.k1 + 1.0) /
                  (tf + params_.k1 * (1.0 - params_.b + params_.b * len / avg_len_));
    score += idf(term) * norm;
  }
  return score;
}

const std::vector<std::string>& Bm25Index::doc_tokens(FactId id) const {
  return tokens_.at(id);
}

std::string Bm25Index::serialize() const {
  std::ostringstream out;
  out << "bm25 k1=" << params_.k1 << " b=" << params_.b << " n=" << ids_.size()
      << " avg_len=" << avg_len_ << "\n";
  for (FactId id : ids_) {
    out << id << "\t" << tokens_.at(id).size();
    for (const auto& [term, n] : term_counts_.at(id)) {
      out << " " << term << ":" << n;
    }
    out << "\n";
  }
  out << "df";
  for (const auto& [term, df] : doc_freq_) {
    out << " " << term << ":" << df;
  }
  out << "\n";
  return out.str();
}

namespace {

void canonical_sort(std::vector<ScoredCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.fact_id < b.fact_id;
            });
}

}  // namespace

void apply_accept_policy(std::vector<ScoredCandidate>& candidates,
                         const AcceptPolicy& policy) {
  canonical_sort(candidates);
  int accepted = 0;
  for (ScoredCandidate& c : candidates) {
    switch (policy.mode) {
      case AcceptPolicy::Mode::kTopK:
        c.accept = accepted < policy.top_k && c.score > policy.min_score;
        break;
      case AcceptPolicy::Mode::kThreshold:
        c.accept = c.score > policy.threshold;
        break;
    }
    if (c.accept) ++accepted;
  }
}

std::vector<ScoredCandidate> Bm25Scorer::score_candidates(
    const ScorerQuery& q, const std::set<FactId>& exclude) const {
  std::vector<std::string> query_tokens = tokenize(q.question);
  for (FactId id : q.path_state) {
    const auto& toks = index_.doc_tokens(id);
    query_tokens.insert(query_tokens.end(), toks.begin(), toks.end());
  }

  std::vector<ScoredCandidate> out;
  for (FactId id : index_.ids()) {
    if (exclude.count(id)) continue;
    out.push_back({id, index_.score(query_tokens, id), false});
  }
  // In backward mode the question itself competes as a virtual document;
  // accepting it closes the chain at the root.
  if (q.direction == Direction::kBackward && !q.path_state.empty()) {
    out.push_back({kQuestionNode,
                   index_.score_virtual(query_tokens, tokenize(q.question)), false});
  }
  apply_accept_policy(out, policy_);
  return out;
}

std::vector<ScoredCandidate> RandomScorer::score_candidates(
    const ScorerQuery& q, const std::set<FactId>& exclude) const {
  FactId anchor = q.path_state.empty()
                      ? kQuestionNode
                      : (q.direction == Direction::kForward ? q.path_state.back()
                                                            : q.path_state.front());
  uint64_t dir = q.direction == Direction::kForward ? 1 : 2;
  std::vector<ScoredCandidate> out;
  auto hashed_score = [&](FactId id) {
    uint64_t h = derive_seed(seed_, dir, static_cast<uint64_t>(anchor + 2),
                             static_cast<uint64_t>(id + 2));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  for (FactId id : ids_) {
    if (exclude.count(id)) continue;
    out.push_back({id, hashed_score(id), false});
  }
  if (q.direction == Direction::kBackward && !q.path_state.empty()) {
    out.push_back({kQuestionNode, hashed_score(kQuestionNode), false});
  }
  apply_accept_policy(out, policy_);
  return out;
}

std::vector<ScoredCandidate> OracleScorer::score_candidates(
    const ScorerQuery& q, const std::set<FactId>& exclude) const {
  std::vector<ScoredCandidate> out;

  if (q.direction == Direction::kForward) {
    FactId end = q.path_state.empty() ? kQuestionNode : q.path_state.back();
    for (FactId id : all_ids_) {
      if (exclude.count(id)) continue;
      bool is_child = gold_.has_edge(end, id);
      out.push_back({id, is_child ? 1.0 : 0.0, is_child});
    }
    canonical_sort(out);
    return out;
  }

  if (q.path_state.empty()) {
    // Seed ranking: leaves first, interior gold nodes next.
    std::set<FactId> leaf_set;
    for (FactId id : gold_.leaves()) leaf_set.insert(id);
    for (FactId id : all_ids_) {
      if (exclude.count(id)) continue;
      double s = leaf_set.count(id) ? 1.0 : (gold_.has_node(id) ? 0.5 : 0.0);
      out.push_back({id, s, false});
    }
    canonical_sort(out);
    return out;
  }

  FactId front = q.path_state.front();
  for (FactId id : all_ids_) {
    if (exclude.count(id)) continue;
    bool is_parent = gold_.has_edge(id, front);
    out.push_back({id, is_parent ? 1.0 : 0.0, is_parent});
  }
  bool root_parent = gold_.has_edge(kQuestionNode, front);
  out.push_back({kQuestionNode, root_parent ? 1.0 : 0.0, root_parent});
  canonical_sort(out);
  return out;
}

std::vector<ScoredCandidate> NoisyOracleScorer::score_candidates(
    const ScorerQuery& q, const std::set<FactId>& exclude) const {
  std::vector<ScoredCandidate> out = oracle_.score_candidates(q, exclude);
  if (p_ <= 0.0) return out;
  if (q.direction == Direction::kBackward && q.path_state.empty()) {
    return out;  // seeding is a ranking, not an accept decision
  }

  FactId anchor = q.path_state.empty()
                      ? kQuestionNode
                      : (q.direction == Direction::kForward ? q.path_state.back()
                                                            : q.path_state.front());
  uint64_t dir = q.direction == Direction::kForward ? 1 : 2;
  int spurious = 0;
  for (ScoredCandidate& c : out) {
    uint64_t h = derive_seed(seed_, dir, static_cast<uint64_t>(anchor + 2),
                             static_cast<uint64_t>(c.fact_id + 2));
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (u >= p_) continue;
    if (c.accept) {
      c.accept = false;
    } else if (spurious < noise_cap_) {
      c.accept = true;
      ++spurious;
    }
  }
  return out;
}

}  // namespace graphhop
