#pragma once

#include <string>
#include <vector>

#include "graphhop/reconstruct.hpp"
#include "graphhop/report.hpp"

namespace graphhop {

enum class Method { kRandom, kBm25TopK, kForward, kBackward, kBgr };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

enum class ScorerKind { kBm25, kRandom, kOracle, kNoisyOracle };

std::string to_string(ScorerKind k);
ScorerKind scorer_kind_from_string(const std::string& s);

struct ScorerSpec {
  ScorerKind kind = ScorerKind::kBm25;
  double noise_p = 0.2;
  int noise_cap = 1;
};

struct RunOptions {
  Method method = Method::kBgr;
  ScorerSpec scorer;
  RetrievalConfig retrieval;
  double gamma = 0.2;
  FuseMode fuse_mode = FuseMode::kUnion;
  uint64_t seed = 0;
  int workers = 1;
  std::string external_reader;  // empty: built-in symbolic reader
  Bm25Index::Params bm25;
};

// Per-instance scorer construction shared by runs and sweeps. Seeds are
// derived from the instance id, so worker scheduling cannot change them.
ScorerFactory make_scorer_factory(const RunOptions& options);

// Evaluates one method over the dataset. The single-hop baselines
// (random, bm25-topk) run as degenerate depth-1 retrievals with k set to
// the gold evidence count and report no graph columns.
RunReport run_method(const std::vector<QAInstance>& instances,
                     const RunOptions& options);

std::vector<SweepRow> run_sweep(const std::vector<QAInstance>& instances,
                                const RunOptions& options,
                                const std::vector<double>& grid);

std::string render_sweep_tsv(const std::vector<SweepRow>& rows);

}  // namespace graphhop
