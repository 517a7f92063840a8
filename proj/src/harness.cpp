#include "graphhop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "graphhop/reader.hpp"
#include "graphhop/rng.hpp"

namespace graphhop {

std::string to_string(Method m) {
  switch (m) {
    case Method::kRandom: return "random";
    case Method::kBm25TopK: return "bm25-topk";
    case Method::kForward: return "forward";
    case Method::kBackward: return "backward";
    case Method::kBgr: return "bgr";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "random") return Method::kRandom;
  if (s == "bm25-topk") return Method::kBm25TopK;
  if (s == "forward") return Method::kForward;
  if (s == "backward") return Method::kBackward;
  if (s == "bgr") return Method::kBgr;
  throw std::invalid_argument("unknown method: " + s);
}

std::string to_string(ScorerKind k) {
  switch (k) {
    case ScorerKind::kBm25: return "bm25";
    case ScorerKind::kRandom: return "random";
    case ScorerKind::kOracle: return "oracle";
    case ScorerKind::kNoisyOracle: return "noisy-oracle";
  }
  return "?";
}

ScorerKind scorer_kind_from_string(const std::string& s) {
  if (s == "bm25") return ScorerKind::kBm25;
  if (s == "random") return ScorerKind::kRandom;
  if (s == "oracle") return ScorerKind::kOracle;
  if (s == "noisy-oracle") return ScorerKind::kNoisyOracle;
  throw std::invalid_argument("unknown scorer: " + s);
}

namespace {

std::vector<FactId> fact_ids(const TextualDatabase& db) {
  std::vector<FactId> ids;
  ids.reserve(db.size());
  for (const Fact& f : db.facts()) ids.push_back(f.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::unique_ptr<Scorer> build_scorer(const RunOptions& options,
                                     const QAInstance& inst,
                                     const AcceptPolicy& policy) {
  switch (options.scorer.kind) {
    case ScorerKind::kBm25:
      return std::make_unique<Bm25Scorer>(build_index(inst.database, options.bm25),
                                          policy);
    case ScorerKind::kRandom:
      return std::make_unique<RandomScorer>(
          fact_ids(inst.database),
          derive_seed(options.seed, hash_str(inst.id), hash_str("random")), policy);
    case ScorerKind::kOracle:
      return std::make_unique<OracleScorer>(inst.gold_graph, fact_ids(inst.database));
    case ScorerKind::kNoisyOracle:
      return std::make_unique<NoisyOracleScorer>(
          inst.gold_graph, fact_ids(inst.database), options.scorer.noise_p,
          derive_seed(options.seed, hash_str(inst.id), hash_str("noisy")),
          options.scorer.noise_cap);
  }
  throw std::invalid_argument("unknown scorer kind");
}

std::string answer_for(const RunOptions& options, const QAInstance& inst,
                       const EvidenceGraph& graph) {
  if (options.external_reader.empty()) return read_answer(inst, graph);
  return run_external_reader(options.external_reader,
                             format_reader_prompt(inst, graph));
}

EvidenceGraph star_graph(const std::set<FactId>& ids) {
  EvidenceGraph g;
  for (FactId id : ids) g.add_edge(kQuestionNode, id);
  return g;
}

InstanceEval evaluate_single_hop(const RunOptions& options, const QAInstance& inst) {
  // Degenerate one-step retrieval: k = |gold evidence|.
  int k = static_cast<int>(inst.gold_graph.evidence_count());
  k = std::max(k, 1);
  RetrievalConfig cfg;
  cfg.max_depth = 1;
  cfg.max_nodes = std::max(k, options.retrieval.max_nodes);
  cfg.top_k_per_path = k;
  AcceptPolicy policy;
  policy.top_k = k;

  std::unique_ptr<Scorer> scorer;
  if (options.method == Method::kRandom) {
    scorer = std::make_unique<RandomScorer>(
        fact_ids(inst.database),
        derive_seed(options.seed, hash_str(inst.id), hash_str("random")), policy);
  } else {
    scorer =
        std::make_unique<Bm25Scorer>(build_index(inst.database, options.bm25), policy);
  }
  RetrievalResult res =
      forward_retrieve(inst.database, *scorer, inst.question, cfg);

  std::set<FactId> pred = res.graph.evidence_nodes();
  InstanceEval eval;
  eval.instance_id = inst.id;
  eval.structure_class = inst.structure_class;
  eval.question_type = inst.question_type;
  SetMetrics sm = set_metrics(pred, inst.gold_graph.evidence_nodes());
  eval.metrics.precision = sm.precision;
  eval.metrics.recall = sm.recall;
  eval.metrics.f1 = sm.f1;
  eval.metrics.set_em = sm.em;
  eval.pred_answer = answer_for(options, inst, star_graph(pred));
  eval.metrics.qa_em = qa_em(eval.pred_answer, inst.answer);
  eval.truncated = res.truncated;
  return eval;
}

InstanceEval evaluate_graph_method(const RunOptions& options,
                                   const QAInstance& inst) {
  AcceptPolicy policy;
  policy.top_k = options.retrieval.top_k_per_path;
  std::unique_ptr<Scorer> scorer = build_scorer(options, inst, policy);

  EvidenceGraph pred;
  InstanceEval eval;
  eval.instance_id = inst.id;
  eval.structure_class = inst.structure_class;
  eval.question_type = inst.question_type;

  if (options.method == Method::kForward) {
    RetrievalResult res =
        forward_retrieve(inst.database, *scorer, inst.question, options.retrieval);
    pred = res.graph;
    eval.truncated = res.truncated;
  } else if (options.method == Method::kBackward) {
    RetrievalResult res =
        backward_retrieve(inst.database, *scorer, inst.question, options.retrieval);
    pred = res.graph;
    eval.truncated = res.truncated;
  } else {
    RetrievalResult fwd =
        forward_retrieve(inst.database, *scorer, inst.question, options.retrieval);
    RetrievalResult bwd =
        backward_retrieve(inst.database, *scorer, inst.question, options.retrieval);
    FuseResult fused = fuse(fwd.graph, bwd.graph, options.gamma, options.fuse_mode,
                            &fwd.edge_scores);
    pred = fused.graph;
    eval.truncated = fwd.truncated || bwd.truncated;
    eval.fuse_combined = fused.combined;
    eval.fuse_cycle_dropped = fused.cycle_dropped;
    eval.fuse_ambiguous = fused.dedup_ambiguous;
    eval.bsc_value = fused.bsc_value;
  }

  eval.metrics.gm = graph_match(pred, inst.gold_graph);
  eval.metrics.gs = graph_structure(pred, inst.gold_graph);
  eval.metrics.ged = graph_edit_distance(pred, inst.gold_graph);
  SetMetrics sm =
      set_metrics(pred.evidence_nodes(), inst.gold_graph.evidence_nodes());
  eval.metrics.precision = sm.precision;
  eval.metrics.recall = sm.recall;
  eval.metrics.f1 = sm.f1;
  eval.metrics.set_em = sm.em;
  eval.pred_chains = serialize_chains(pred);
  eval.pred_answer = answer_for(options, inst, pred);
  eval.metrics.qa_em = qa_em(eval.pred_answer, inst.answer);
  return eval;
}

InstanceEval evaluate_instance(const RunOptions& options, const QAInstance& inst) {
  if (options.method == Method::kRandom || options.method == Method::kBm25TopK) {
    return evaluate_single_hop(options, inst);
  }
  return evaluate_graph_method(options, inst);
}

}  // namespace

ScorerFactory make_scorer_factory(const RunOptions& options) {
  RunOptions opts = options;
  return [opts](const QAInstance& inst) -> std::unique_ptr<Scorer> {
    AcceptPolicy policy;
    policy.top_k = opts.retrieval.top_k_per_path;
    return build_scorer(opts, inst, policy);
  };
}

RunReport run_method(const std::vector<QAInstance>& instances,
                     const RunOptions& options) {
  options.retrieval.validate();
  if (options.gamma < 0.0 || options.gamma > 1.0) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }

  std::vector<InstanceEval> evals(instances.size());
  int workers = std::max(1, options.workers);
  if (workers == 1 || instances.size() < 2) {
    for (size_t i = 0; i < instances.size(); ++i) {
      evals[i] = evaluate_instance(options, instances[i]);
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    // Results land in instance order, so aggregation below is unaffected
    // by scheduling.
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          size_t i = next.fetch_add(1);
          if (i >= instances.size()) break;
          evals[i] = evaluate_instance(options, instances[i]);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  RunReport report;
  report.method = to_string(options.method);
  report.scorer = options.method == Method::kRandom      ? "random"
                  : options.method == Method::kBm25TopK ? "bm25"
                                                        : to_string(options.scorer.kind);
  report.gamma = options.gamma;
  report.fuse_mode = to_string(options.fuse_mode);
  report.seed = options.seed;
  report.per_instance = std::move(evals);
  report.aggregates = aggregate(report.per_instance);
  return report;
}

std::vector<SweepRow> run_sweep(const std::vector<QAInstance>& instances,
                                const RunOptions& options,
                                const std::vector<double>& grid) {
  SweepOptions sweep;
  sweep.retrieval = options.retrieval;
  sweep.mode = options.fuse_mode;
  return gamma_sweep(instances, make_scorer_factory(options), grid, sweep);
}

std::string render_sweep_tsv(const std::vector<SweepRow>& rows) {
  std::string out = "gamma\tf1\tgm\n";
  for (const SweepRow& row : rows) {
    out += format_fixed(row.gamma) + "\t" + format_fixed(row.f1_pct) + "\t" +
           format_fixed(row.gm_pct) + "\n";
  }
  return out;
}

}  // namespace graphhop
