#pragma once

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphhop/instance.hpp"
#include "graphhop/program_exec.hpp"
#include "graphhop/types.hpp"

namespace graphhop {

// Plain-text knowledge store, one "head<TAB>relation<TAB>tail" per line.
class TripleStore : public TripleSource {
 public:
  static TripleStore load_file(const std::string& path);
  static TripleStore from_triples(std::vector<Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  size_t size() const { return triples_.size(); }

  std::vector<Triple> forward(const std::string& head,
                              const std::string& relation) const override;
  std::vector<Triple> backward(const std::string& relation,
                               const std::string& tail) const override;
  bool has_entity(const std::string& name) const override;

  // Indices into triples() sharing the given head.
  std::vector<size_t> by_head(const std::string& head) const;

 private:
  std::vector<Triple> triples_;  // sorted, unique
  std::map<std::pair<std::string, std::string>, std::vector<size_t>> rel_tail_;
  std::set<std::string> entities_;
};

struct GenConfig {
  int n_instances = 200;
  std::map<StructureClass, double> structure_mix = {
      {StructureClass::kScSh, 0.195},
      {StructureClass::kScMh, 0.386},
      {StructureClass::kMcSh, 0.087},
      {StructureClass::kMcMh, 0.332},
  };
  int db_size = 25;
  double distractor_ratio = 0.8;  // realized ratio is reported, dbs fill to db_size
  uint64_t rng_seed = 7;
  std::array<double, 3> split_ratio = {0.8, 0.1, 0.1};
  // Chance of attaching each extra same-head triple to a fact's sentence.
  double bundle_prob = 0.3;
  std::string triples_path;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Deterministic template rendering of 1..3 same-head triples into one
// evidence text. Every head and tail surface form appears verbatim.
std::string verbalize(const std::vector<Triple>& bundle, uint64_t seed);

// Executes a program against the store. ok=false carries the reason the
// grounding failed.
ExecTrace ground_program(const GoldenProgram& program, const TripleStore& store);

// Gold graph construction from a grounded layout: hops map onto fact
// slots (merged hops share a slot), every chain opens at the root.
struct GroundedLayout {
  std::vector<ExecHop> hops;
  std::vector<int> fact_of;  // hop index -> fact slot
  int n_facts = 0;
};

class GraphConstraintError : public std::runtime_error {
 public:
  GraphConstraintError(std::string what, std::vector<ConstraintViolation> violations)
      : std::runtime_error(std::move(what)), violations(std::move(violations)) {}
  std::vector<ConstraintViolation> violations;
};

// Throws GraphConstraintError when the layout yields an invalid graph.
EvidenceGraph build_gold_graph(const GroundedLayout& layout);

// Distractor selection. Categories fill in the order semantic, same-head,
// random with counts differing by at most one; same-head shortfalls are
// backfilled from the random category.
class DistractorInjector {
 public:
  explicit DistractorInjector(const TripleStore& store);

  struct Result {
    std::vector<Fact> facts;  // ids assigned by the caller
    std::array<int, 3> category_counts{0, 0, 0};
    bool backfilled = false;
  };

  Result inject(const std::string& question, const std::vector<Fact>& gold_facts,
                const std::vector<QueryPattern>& patterns,
                const std::set<Triple>& used, int count, uint64_t seed) const;

 private:
  const TripleStore& store_;
  std::vector<std::vector<std::string>> canonical_tokens_;  // per triple
};

struct DistributionReport {
  int requested = 0;
  int emitted = 0;
  int grounding_failures = 0;
  std::array<int, 3> split_sizes{0, 0, 0};
  // class -> counts per split (train, dev, test)
  std::map<StructureClass, std::array<int, 3>> class_counts;
  std::map<QuestionType, int> question_type_counts;
  std::map<DistractorKind, int> distractor_counts;
  double realized_distractor_ratio = 0.0;
  std::vector<std::string> failure_log;
};

struct GeneratedDataset {
  std::vector<QAInstance> train;
  std::vector<QAInstance> dev;
  std::vector<QAInstance> test;
  DistributionReport report;

  std::vector<const QAInstance*> all() const;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full pipeline: programs -> grounding -> verbalized facts -> distractors
// -> gold graphs -> splits. Aborts when more than 20% of attempts fail to
// ground.
GeneratedDataset generate(const TripleStore& store, const GenConfig& cfg);

}  // namespace graphhop
